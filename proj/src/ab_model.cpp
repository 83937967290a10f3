#include "abprop/ab_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace abprop {

namespace {

constexpr double kPi = std::numbers::pi;
const complex kI(0.0, 1.0);

void require_span(const PhysParams& params, const TimeGrid& grid) {
    if (grid.t0 > params.t0 || grid.t < params.t)
        throw std::invalid_argument("grid does not cover the propagation interval [t0, t]");
}

bool in_window(const PhysParams& params, const TimeGrid& grid, int cell) {
    const double m = grid.midpoint(cell);
    return m >= params.t0 && m < params.t;
}

}  // namespace

double PhysParams::a_value() const {
    return std::isnan(a) ? 0.5 * (t - t0) : a;
}

double PhysParams::alpha() const { return -e * phi / (2.0 * kPi * hbar * c); }

void PhysParams::set_alpha(double alpha_target) {
    phi = -alpha_target * 2.0 * kPi * hbar * c / e;
}

double PhysParams::D() const { return std::sqrt(hbar * m0); }

double PhysParams::E() const { return std::sqrt(hbar / (m0 * R * R)); }

void PhysParams::validate() const {
    if (!(m0 > 0.0)) throw std::domain_error("m0 must be positive");
    if (!(R > 0.0)) throw std::domain_error("R must be positive");
    if (!(hbar > 0.0)) throw std::domain_error("hbar must be positive");
    if (!(c > 0.0)) throw std::domain_error("c must be positive");
    if (!(e > 0.0)) throw std::domain_error("e must be positive");
    if (!(t > t0) || t0 < 0.0) throw std::domain_error("need t > t0 >= 0");
    const double av = a_value();
    if (av == 0.0) throw std::domain_error("a must be nonzero");
    if (std::abs(av) > t) throw std::domain_error("a must satisfy |a| <= t");
}

PathPair build_paths(const PhysParams& params, const NoiseSample& noise) {
    const TimeGrid& grid = noise.values.grid();
    if (grid.t0 != params.t0 || grid.t != params.t)
        throw std::invalid_argument("build_paths: noise grid must span [t0, t]");
    const int n = grid.n_cells;
    const double dt = grid.dt();
    const double gamma = params.p0 / (params.m0 * params.R);
    const double e_coef = params.E();
    const double d_coef = params.D();
    const double a = params.a_value();

    PathPair path{grid, params, {}, {}, {}, {}};
    path.noise_theta.resize(n);
    path.theta_node.resize(n + 1);
    path.p_node.resize(n + 1);
    path.p_cell.resize(n);

    for (int i = 0; i < n; ++i) path.noise_theta[i] = noise.values.at(0, i).real();
    double cum = 0.0;
    for (int i = 0; i <= n; ++i) {
        path.theta_node[i] = gamma * (i * dt + a) + e_coef * cum;
        if (i < n) cum += path.noise_theta[i] * dt;
    }
    path.p_node[0] = params.p0;  // noise pinned to zero at the start
    for (int i = 0; i < n; ++i) path.p_cell[i] = params.p0 + d_coef * path.noise_theta[i];
    for (int i = 1; i <= n; ++i) path.p_node[i] = path.p_cell[std::min(i, n - 1)];
    return path;
}

double PathPair::theta(double s) const {
    if (s < grid.t0 || s > grid.t)
        throw std::domain_error("PathPair::theta: time outside the grid");
    const double dt = grid.dt();
    // Number of cells whose midpoint lies strictly before s.
    int count = static_cast<int>(std::ceil((s - grid.t0) / dt - 0.5));
    count = std::max(0, std::min(count, grid.n_cells));
    const double gamma = params.p0 / (params.m0 * params.R);
    double cum = 0.0;
    for (int i = 0; i < count; ++i) cum += noise_theta[i];
    return gamma * (s - grid.t0 + params.a_value()) + params.E() * cum * dt;
}

double PathPair::ptheta(double s) const {
    if (s == grid.t0) return params.p0;
    return p_cell[grid.cell_of(s)];
}

complex action_closed(const PhysParams& params, const NoiseSample& noise) {
    const TimeGrid& grid = noise.values.grid();
    if (grid.t0 != params.t0 || grid.t != params.t)
        throw std::invalid_argument("action_closed: noise grid must span [t0, t]");
    const int n = grid.n_cells;
    const double dt = grid.dt();
    const double alpha = params.alpha();
    const double d_coef = params.D();

    const double p_final = params.p0 + d_coef * noise.values.at(0, n - 1).real();
    double sum_w = 0.0, sum_w2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double w = noise.values.at(0, i).real();
        sum_w += w * dt;
        sum_w2 += w * w * dt;
    }
    const double delta = params.delta();
    const double boundary =
        -params.p0 / (2.0 * params.m0) *
        ((p_final + 2.0 * alpha / params.R) * delta +
         (p_final - params.p0) * (delta + 2.0 * params.a_value()));
    const double noise_terms =
        0.5 * params.hbar * sum_w2 +
        std::sqrt(params.hbar / params.m0) *
            (-alpha / params.R - (p_final - params.p0)) * sum_w;
    return complex(boundary + noise_terms, 0.0);
}

complex action_direct(const PhysParams& params, const NoiseSample& noise) {
    const TimeGrid& grid = noise.values.grid();
    if (grid.n_cells < 2)
        throw std::invalid_argument("action_direct: need n_cells >= 2");
    const PathPair path = build_paths(params, noise);
    const int n = grid.n_cells;
    const double dt = grid.dt();

    double stieltjes = 0.0;
    for (int i = 0; i < n; ++i)
        stieltjes += path.theta_node[i] * (path.p_node[i + 1] - path.p_node[i]);

    double hamiltonian = 0.0;
    const double c1 = params.C1(), c2 = params.C2();
    for (int i = 0; i < n; ++i) {
        const double p = path.p_cell[i];
        hamiltonian += (c1 * p * p - c2 * p) * dt;
    }
    return complex(-params.R * stieltjes - hamiltonian, 0.0);
}

GaussianFunctional build_integrand(const PhysParams& params, const TimeGrid& grid) {
    require_span(params, grid);
    const double delta = params.delta();
    const double d_coef = params.D();

    BlockOperator k(grid, 2);
    k.fill_window(params.t0, params.t,
                  {complex(-1.0, -1.0), complex(-1.0, 0.0),
                   complex(1.0, 0.0), complex(-1.0, 0.0)});

    // p_theta(t) is resolved by the pinned value p1.
    const double c_shift =
        (1.0 / d_coef) * (-params.alpha() / params.R - (params.p1 - params.p0));
    GridFunction g = complex(c_shift) * indicator(grid, params.t0, params.t, 0);

    GridFunction eta = complex(d_coef / delta) * indicator(grid, params.t0, params.t, 0);
    const double y = params.p1 - params.p0;

    return GaussianFunctional{k, g, {Pin{eta, y}}, Normalization::eliminate_det()};
}

BlockOperator n_eps_inverse(const PhysParams& params, const TimeGrid& grid, double eps) {
    if (eps < 0.0) throw std::domain_error("n_eps_inverse: eps must be >= 0");
    require_span(params, grid);
    BlockOperator op = BlockOperator::identity(grid, 2);
    // The eps term is a constant multiplication operator over the whole line.
    for (int i = 0; i < grid.n_cells; ++i) op.block(0, 0, i) += eps;
    op.fill_window(params.t0, params.t,
                   {complex(eps, 0.0), complex(1.0, 0.0),
                    complex(-1.0, 0.0), complex(0.0, -1.0)});
    return op;
}

BlockOperator n_eps_forward(const PhysParams& params, const TimeGrid& grid, double eps) {
    return n_eps_inverse(params, grid, eps).inverse();
}

complex quad_form_feps(const PhysParams& params, const TimeGrid& grid, double eps,
                       const GridFunction& f) {
    require_span(params, grid);
    if (!(f.grid() == grid) || f.components() != 2)
        throw std::invalid_argument("quad_form_feps: f must be a 2-component function on grid");
    const double d_coef = params.D();
    const complex c_shift =
        (1.0 / d_coef) * (-params.alpha() / params.R - (params.p1 - params.p0));
    const double dt = grid.dt();

    complex theta_off(0.0), theta_win(0.0), mom_win(0.0), mom_off(0.0);
    for (int i = 0; i < grid.n_cells; ++i) {
        const complex ft = f.at(0, i);
        const complex fp = f.at(1, i);
        if (in_window(params, grid, i)) {
            const complex shifted = ft + c_shift;
            theta_win += shifted * shifted * dt;
            mom_win += fp * fp * dt;
        } else {
            theta_off += ft * ft * dt;
            mom_off += fp * fp * dt;
        }
    }
    return (eps + 1.0) * theta_off + eps * theta_win - kI * mom_win + mom_off;
}

complex classical_prefactor(const PhysParams& params) {
    const double delta = params.delta();
    const double bracket =
        (params.p1 + 2.0 * params.alpha() / params.R) * delta +
        (params.p1 - params.p0) * (delta + 2.0 * params.a_value());
    return std::exp(-kI * params.p0 / (2.0 * params.hbar * params.m0) * bracket);
}

complex t_transform_eps(const PhysParams& params, const TimeGrid& grid, double eps,
                        const GridFunction& f) {
    if (!(eps > 0.0)) throw std::domain_error("t_transform_eps: eps must be > 0");
    const GaussianFunctional integrand = build_integrand(params, grid);
    const BlockOperator n_inv = n_eps_inverse(params, grid, eps);
    return classical_prefactor(params) * t_transform_lemma(integrand, f, n_inv);
}

PropagatorValue propagator_limit(const PhysParams& params) {
    const double delta = params.delta();
    const complex phase =
        std::exp(-kI * params.p0 * (params.p1 + 2.0 * params.alpha() / params.R) * delta /
                 (2.0 * params.hbar * params.m0));
    return PropagatorValue{params.p1 - params.p0, phase, std::nullopt};
}

}  // namespace abprop
