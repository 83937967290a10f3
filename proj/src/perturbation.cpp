#include "abprop/perturbation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace abprop {

namespace {
const complex kI(0.0, 1.0);
}

complex g_n_eval(const PhysParams& params, const GridFunction& phi,
                 const std::vector<double>& s_list, const std::vector<double>& beta_list) {
    if (s_list.size() != beta_list.size())
        throw std::invalid_argument("g_n_eval: s_list and beta_list must have equal length");
    for (double s : s_list)
        if (s < params.t0 || s > params.t)
            throw std::invalid_argument("g_n_eval: s_j outside [t0, t]");
    if (beta_list.empty()) return complex(1.0);

    const TimeGrid& grid = phi.grid();
    if (phi.components() != 2)
        throw std::invalid_argument("g_n_eval: phi must have 2 components");

    double beta_sum = 0.0;
    double weighted = 0.0;  // sum beta_j (t - s_j)
    for (std::size_t j = 0; j < beta_list.size(); ++j) {
        beta_sum += beta_list[j];
        weighted += beta_list[j] * (params.t - s_list[j]);
    }

    complex phi_p_integral(0.0);
    for (int i = 0; i < grid.n_cells; ++i) {
        const double m = grid.midpoint(i);
        if (m >= params.t0 && m < params.t) phi_p_integral += phi.at(1, i) * grid.dt();
    }

    const complex endpoint = std::exp(params.p1 / (params.m0 * params.R) * beta_sum);
    const complex spread =
        std::exp(params.E() / params.delta() * phi_p_integral * weighted);
    return endpoint * spread;
}

double g_n_bound(const PhysParams& params, const GridFunction& phi,
                 const std::vector<double>& beta_list) {
    if (beta_list.empty()) return 1.0;
    const TimeGrid& grid = phi.grid();
    double norm_sq = 0.0;
    for (int i = 0; i < grid.n_cells; ++i) {
        const double m = grid.midpoint(i);
        if (m >= params.t0 && m < params.t) norm_sq += std::norm(phi.at(1, i)) * grid.dt();
    }
    const double c_const = std::abs(params.p1) / (params.m0 * params.R) +
                           params.E() * std::sqrt(params.delta()) * std::sqrt(norm_sq);
    double abs_beta_sum = 0.0;
    for (double b : beta_list) abs_beta_sum += std::abs(b);
    return std::exp(c_const * abs_beta_sum);
}

SeriesResult series_propagator(const PhysParams& params, const AtomicMeasure& m, int order) {
    if (order < 0) throw std::invalid_argument("series_propagator: order must be >= 0");
    if (params.p1 != params.p0)
        throw std::invalid_argument("series_propagator: requires p1 = p0");
    const double delta = params.delta();
    const complex vhat = potential_eval(m, params.p1 / (params.m0 * params.R));
    const complex x = -kI / params.hbar * delta * vhat;

    complex partial(0.0);
    complex term(1.0);
    for (int n = 0; n <= order; ++n) {
        partial += term;
        term *= x / static_cast<double>(n + 1);
    }
    // term now holds x^(N+1)/(N+1)!.
    const double remainder = std::abs(term) * std::exp(std::abs(x));

    const complex phase0 = std::exp(-kI * params.p0 * params.p0 * delta /
                                    (2.0 * params.m0 * params.hbar));
    SeriesResult out;
    out.value = PropagatorValue{params.p1 - params.p0, phase0 * partial, std::nullopt};
    out.report = TruncationReport{x, order, partial, remainder};
    return out;
}

PropagatorValue closed_form_propagator(const PhysParams& params, const AtomicMeasure& m) {
    const complex vhat = potential_eval(m, params.p1 / (params.m0 * params.R));
    const complex exponent = -kI / params.hbar * params.delta() *
                             (params.p0 * params.p0 / (2.0 * params.m0) + vhat);
    return PropagatorValue{params.p1 - params.p0, std::exp(exponent), std::nullopt};
}

double series_global_bound(const PhysParams& params, const AtomicMeasure& m, double C) {
    if (C < 0.0) throw std::invalid_argument("series_global_bound: C must be >= 0");
    return std::exp(params.delta() * m.moment(C));
}

ABReduction make_ab_reduction(const PhysParams& params, int k, int n) {
    if (k == 0 || n == 0)
        throw std::invalid_argument("make_ab_reduction: k and n must be nonzero integers");
    if (params.p1 == 0.0)
        throw std::domain_error("make_ab_reduction: p1 = 0 makes B degenerate");
    ABReduction red;
    red.k = k;
    red.n = n;
    red.coupling = 1.0;
    red.B = static_cast<double>(k) * params.hbar * params.p1 /
            (static_cast<double>(n) * params.c * params.m0 * params.R);
    red.b = 1.0 + 1.0 / red.B;
    red.alpha_frac = static_cast<double>(k) / static_cast<double>(n);
    red.detectable = (k % n) != 0;
    return red;
}

double first_order_potential(const ABReduction& red, const PhysParams& /*params*/,
                             double theta_dot) {
    return red.coupling - red.coupling * red.b * red.alpha_frac * theta_dot;
}

double potential_series(const ABReduction& red, double theta_dot, int order, double sign) {
    if (order < 0) throw std::invalid_argument("potential_series: order must be >= 0");
    const double base = red.b * red.alpha_frac * theta_dot;
    double acc = 0.0;
    double term = 1.0;
    for (int j = 0; j <= order; ++j) {
        acc += term;
        term *= sign * base / static_cast<double>(j + 1);
    }
    return red.coupling * acc;
}

double ab_linear_coefficient(const ABReduction& red, const PhysParams& params) {
    // -b k/n splits into the flux part -k/n and the constant-producing part
    // -c m0 R / (hbar p1); the latter is removed here.
    return -red.b * red.alpha_frac +
           params.c * params.m0 * params.R / (params.hbar * params.p1);
}

}  // namespace abprop
