#ifndef ABPROP_PROPAGATORS_HPP
#define ABPROP_PROPAGATORS_HPP

#include "abprop/ab_model.hpp"
#include "abprop/propagator_value.hpp"

namespace abprop {

/// Single-winding closed form; same value as propagator_limit.
PropagatorValue propagator_no_winding(const PhysParams& params);

/// Exponent of the equivalent flux form p0 (p0 - e phi / (pi hbar c R)) delta
/// / (2 m0 hbar), for the algebraic-identity checks against the 2 alpha / R
/// form.  Meaningful under conservation (p1 = p0).
double main_theorem_exponent(const PhysParams& params);

/// Full phase (offset term included, since p1 may differ from p0 before
/// conservation is imposed) plus the symbolic winding comb.  truncation seeds
/// the comb's default partial-sum order.
PropagatorValue propagator_winding(const PhysParams& params, int truncation);

/// Gaussian-regularized delta comb sum_{|l| <= truncation} G_sigma(x - l T).
double poisson_comb_lhs(double x, double period, double sigma, int truncation);

/// Fourier side of the same comb: (1/T) sum_{|k| <= truncation}
/// cos(2 pi k x / T) exp(-2 pi^2 k^2 sigma^2 / T^2), real by k <-> -k symmetry.
double poisson_comb_rhs(double x, double period, double sigma, int truncation);

/// Smallest flux increment shifting the alpha-dependent exponent part by
/// 2 pi: the alpha-period 2 pi hbar m0 R / (p0 (t - t0)) mapped through
/// alpha(phi).  Degenerate for p0 = 0 or t = t0.
double ab_period_check(const PhysParams& params);

}  // namespace abprop

#endif
