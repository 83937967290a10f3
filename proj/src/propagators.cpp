#include "abprop/propagators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace abprop {

namespace {
constexpr double kPi = std::numbers::pi;
}  // namespace

complex WindingComb::partial_sum(int truncation) const {
    if (truncation < 0)
        throw std::invalid_argument("WindingComb::partial_sum: truncation must be >= 0");
    // 1 + 2 sum cos(l x): real by l <-> -l pairing.
    double acc = 1.0;
    for (int l = 1; l <= truncation; ++l) acc += 2.0 * std::cos(l * argument);
    return complex(acc, 0.0);
}

double dirichlet_kernel(double x, int truncation) {
    const double half = std::sin(0.5 * x);
    if (std::abs(half) < 1e-12) return 2.0 * truncation + 1.0;  // removable limit
    return std::sin((truncation + 0.5) * x) / half;
}

PropagatorValue propagator_no_winding(const PhysParams& params) {
    return propagator_limit(params);
}

double main_theorem_exponent(const PhysParams& params) {
    return params.p0 *
           (params.p0 - params.e * params.phi / (kPi * params.hbar * params.c * params.R)) *
           params.delta() / (2.0 * params.m0 * params.hbar);
}

PropagatorValue propagator_winding(const PhysParams& params, int truncation) {
    if (truncation < 0)
        throw std::invalid_argument("propagator_winding: truncation must be >= 0");
    WindingComb comb;
    comb.argument = params.delta() * (params.p0 - params.p1) / (params.m0 * params.R);
    comb.l0 = 0;
    comb.default_truncation = truncation;
    return PropagatorValue{params.p1 - params.p0, classical_prefactor(params), comb};
}

double poisson_comb_lhs(double x, double period, double sigma, int truncation) {
    if (!(period > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("poisson_comb_lhs: period and sigma must be > 0");
    const double norm = 1.0 / (sigma * std::sqrt(2.0 * kPi));
    double acc = 0.0;
    for (int l = -truncation; l <= truncation; ++l) {
        const double u = (x - l * period) / sigma;
        acc += norm * std::exp(-0.5 * u * u);
    }
    return acc;
}

double poisson_comb_rhs(double x, double period, double sigma, int truncation) {
    if (!(period > 0.0) || !(sigma > 0.0))
        throw std::invalid_argument("poisson_comb_rhs: period and sigma must be > 0");
    double acc = 1.0;
    for (int k = 1; k <= truncation; ++k) {
        const double damp = std::exp(-2.0 * kPi * kPi * k * k * sigma * sigma / (period * period));
        acc += 2.0 * std::cos(2.0 * kPi * k * x / period) * damp;
    }
    return acc / period;
}

double ab_period_check(const PhysParams& params) {
    if (params.p0 == 0.0 || params.t == params.t0)
        throw std::domain_error("ab_period_check: degenerate period (p0 = 0 or t = t0)");
    const double alpha_period =
        2.0 * kPi * params.hbar * params.m0 * params.R / (params.p0 * params.delta());
    // d phi / d alpha = -2 pi hbar c / e; the period is a magnitude.
    return std::abs(alpha_period * 2.0 * kPi * params.hbar * params.c / params.e);
}

}  // namespace abprop
