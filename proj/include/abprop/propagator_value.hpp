#ifndef ABPROP_PROPAGATOR_VALUE_HPP
#define ABPROP_PROPAGATOR_VALUE_HPP

#include <optional>

#include "abprop/lattice.hpp"

namespace abprop {

/// Symbolic winding sum sum_l exp(i l argument).  Never summed in full: the
/// series is not absolutely convergent, so only labeled partial sums
/// (Dirichlet kernels) are evaluated.
struct WindingComb {
    double argument = 0.0;      // (t-t0)(p0-p1)/(m0 R)
    int l0 = 0;                 // winding offset at t0; fixed to 0
    int default_truncation = 8;

    complex partial_sum(int truncation) const;
    complex partial_sum() const { return partial_sum(default_truncation); }
};

/// Closed form sin((L+1/2)x)/sin(x/2) of the truncated comb.
double dirichlet_kernel(double x, int truncation);

/// Momentum-space propagator: a conservation-delta marker with argument
/// p1 - p0, a complex phase factor, and (for winding propagators) the comb.
struct PropagatorValue {
    double delta_arg = 0.0;
    complex phase = 1.0;
    std::optional<WindingComb> comb;
};

}  // namespace abprop

#endif
