#ifndef ABPROP_SCHRODINGER_HPP
#define ABPROP_SCHRODINGER_HPP

#include <stdexcept>

#include "abprop/ab_model.hpp"
#include "abprop/measure.hpp"

namespace abprop {

enum class PropagatorKind { ab_bound_state, circle, exponential_class };

/// Thrown when a check requires momentum conservation but p1 != p0; carries
/// the leftover evolution term that has no counterpart on the potential side.
struct ConservationError : std::domain_error {
    ConservationError(const std::string& msg, complex leftover_term)
        : std::domain_error(msg), leftover(leftover_term) {}
    complex leftover;
};

/// Exponent coefficient of a closed-form propagator phase exp(-i E (t-t0)/hbar)
/// together with the potential it came from.
struct EnergySpec {
    PropagatorKind kind = PropagatorKind::circle;
    PhysParams params;
    AtomicMeasure measure;  // exponential_class only

    complex energy() const;
};

EnergySpec ab_spec(const PhysParams& params);
EnergySpec circle_spec(const PhysParams& params);
EnergySpec exponential_spec(const PhysParams& params, const AtomicMeasure& m);

/// Momentum-transfer kernel (1/2pi) int_0^{2pi} e^{-i dp theta / hbar} V.
/// dp = 0 gives V at the angular velocity p_at / (m0 R); otherwise the
/// oscillatory factor (e^{-2 pi i dp/hbar} - 1) / (-2 pi i dp/hbar) times V.
complex w_kernel(const EnergySpec& spec, double dp, double p_at);

/// |E(p0) - p0^2/(2 m0) - W(0, p0)| under conservation.  Requires p1 = p0.
double residual_analytic(const EnergySpec& spec);

/// Max modulus over a 5-point stencil in t of the central-difference evolution
/// defect i hbar d/dt phase - (p0^2/(2 m0) + W) phase.  Second order in dt_fd.
double residual_fd(const EnergySpec& spec, double dt_fd);

/// The term (i l / (m0 R) + i p0 / (2 m0 hbar)) (p0 - p1) left over by the
/// winding comb; zero iff momentum is conserved.
complex winding_residual_term(const PhysParams& params, int l);

/// Diagnostic only: evaluates the potential integral with a nascent delta of
/// width sigma_p by quadrature instead of the sifting identity.
complex w_integral_quadrature(const EnergySpec& spec, double sigma_p, int n_points = 4001);

}  // namespace abprop

#endif
