#include "abprop/schrodinger.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace abprop {

namespace {
constexpr double kPi = std::numbers::pi;
const complex kI(0.0, 1.0);
}  // namespace

EnergySpec ab_spec(const PhysParams& params) {
    return EnergySpec{PropagatorKind::ab_bound_state, params, {}};
}

EnergySpec circle_spec(const PhysParams& params) {
    return EnergySpec{PropagatorKind::circle, params, {}};
}

EnergySpec exponential_spec(const PhysParams& params, const AtomicMeasure& m) {
    return EnergySpec{PropagatorKind::exponential_class, params, m};
}

complex EnergySpec::energy() const {
    const double kinetic = params.p0 * params.p0 / (2.0 * params.m0);
    switch (kind) {
        case PropagatorKind::ab_bound_state:
            return params.p0 * (params.p0 + 2.0 * params.alpha() / params.R) /
                   (2.0 * params.m0);
        case PropagatorKind::circle:
            return kinetic;
        case PropagatorKind::exponential_class:
            return kinetic + potential_eval(measure, params.p0 / (params.m0 * params.R));
    }
    return kinetic;
}

complex w_kernel(const EnergySpec& spec, double dp, double p_at) {
    const PhysParams& p = spec.params;
    complex v(0.0);
    switch (spec.kind) {
        case PropagatorKind::ab_bound_state:
            v = p.alpha() * p_at / (p.m0 * p.R);
            break;
        case PropagatorKind::circle:
            v = 0.0;
            break;
        case PropagatorKind::exponential_class:
            v = potential_eval(spec.measure, p_at / (p.m0 * p.R));
            break;
    }
    if (dp == 0.0) return v;
    const complex arg = -2.0 * kPi * kI * dp / p.hbar;
    return (std::exp(arg) - 1.0) / arg * v;
}

double residual_analytic(const EnergySpec& spec) {
    const PhysParams& p = spec.params;
    if (p.p1 != p.p0) {
        const complex leftover =
            kI * p.p0 / (2.0 * p.m0 * p.hbar) * (p.p0 - p.p1);
        throw ConservationError(
            "residual_analytic: requires p1 = p0; leftover evolution term " +
                std::to_string(leftover.real()) + " + " +
                std::to_string(leftover.imag()) + "i remains",
            leftover);
    }
    const complex defect = spec.energy() -
                           p.p0 * p.p0 / (2.0 * p.m0) -
                           w_kernel(spec, 0.0, p.p0);
    return std::abs(defect);
}

double residual_fd(const EnergySpec& spec, double dt_fd) {
    if (!(dt_fd > 0.0)) throw std::invalid_argument("residual_fd: dt_fd must be > 0");
    const PhysParams& p = spec.params;
    const complex energy = spec.energy();
    const complex rhs_coeff = p.p0 * p.p0 / (2.0 * p.m0) + w_kernel(spec, 0.0, p.p0);
    const auto phase = [&](double tt) { return std::exp(-kI * energy * (tt - p.t0) / p.hbar); };

    double worst = 0.0;
    for (int k = -2; k <= 2; ++k) {
        const double tt = p.t + k * dt_fd;
        const complex ddt = (phase(tt + dt_fd) - phase(tt - dt_fd)) / (2.0 * dt_fd);
        worst = std::max(worst, std::abs(kI * p.hbar * ddt - rhs_coeff * phase(tt)));
    }
    return worst;
}

complex winding_residual_term(const PhysParams& params, int l) {
    return (kI * static_cast<double>(l) / (params.m0 * params.R) +
            kI * params.p0 / (2.0 * params.m0 * params.hbar)) *
           (params.p0 - params.p1);
}

complex w_integral_quadrature(const EnergySpec& spec, double sigma_p, int n_points) {
    if (!(sigma_p > 0.0)) throw std::invalid_argument("w_integral_quadrature: sigma_p must be > 0");
    if (n_points < 3 || n_points % 2 == 0)
        throw std::invalid_argument("w_integral_quadrature: n_points must be odd and >= 3");
    const double p0 = spec.params.p0;
    const double lo = p0 - 8.0 * sigma_p;
    const double hi = p0 + 8.0 * sigma_p;
    const double h = (hi - lo) / (n_points - 1);
    const auto f = [&](double q) {
        const double u = (q - p0) / sigma_p;
        const double bump = std::exp(-0.5 * u * u) / (sigma_p * std::sqrt(2.0 * kPi));
        return w_kernel(spec, p0 - q, q) * bump;
    };
    complex acc = f(lo) + f(hi);
    for (int i = 1; i < n_points - 1; ++i) acc += f(lo + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

}  // namespace abprop
