#include "abprop/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <functional>
#include <numbers>

#include "abprop/perturbation.hpp"
#include "abprop/propagators.hpp"
#include "abprop/schrodinger.hpp"

namespace abprop {

namespace {

constexpr double kPi = std::numbers::pi;

double uniform_in(NormalRng& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.uniform01();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), pattern, a, b, c);
    return buf;
}

}  // namespace

GaussianInstance random_gaussian_instance(NormalRng& rng, int max_cells, int forced_pins) {
    const int n = 4 + static_cast<int>(uniform_in(rng, 0.0, 0.999) * (max_cells - 3));
    const double t0 = uniform_in(rng, 0.0, 0.5);
    const double delta = uniform_in(rng, 0.5, 2.0);
    TimeGrid grid(t0, t0 + delta, n);

    // Symmetric cell blocks: the pairing is bilinear, so a Gaussian kernel is
    // symmetric by nature and the dense integral is an honest cross-check.
    BlockOperator k(grid, 2);
    for (int cell = 0; cell < n; ++cell)
        for (int r = 0; r < 2; ++r)
            for (int c = r; c < 2; ++c) {
                const complex v(0.17 * uniform_in(rng, -1.0, 1.0),
                                0.17 * uniform_in(rng, -1.0, 1.0));
                k.block(r, c, cell) = v;
                k.block(c, r, cell) = v;
            }

    GridFunction g(grid, 2), f(grid, 2);
    for (int c = 0; c < 2; ++c)
        for (int cell = 0; cell < n; ++cell) {
            g.at(c, cell) = uniform_in(rng, -0.8, 0.8);
            f.at(c, cell) = uniform_in(rng, -0.8, 0.8);
        }

    const int n_pins = (forced_pins >= 0)
                           ? forced_pins
                           : static_cast<int>(uniform_in(rng, 0.0, 2.999));
    std::vector<Pin> pins;
    const double mid = t0 + 0.5 * delta;
    for (int p = 0; p < n_pins; ++p) {
        // Separated supports keep the pin matrix well conditioned.
        GridFunction eta = indicator(grid, p == 0 ? t0 : mid, p == 0 ? mid : grid.t, p);
        for (int cell = 0; cell < n; ++cell)
            eta.at(p, cell) += 0.3 * uniform_in(rng, -1.0, 1.0);
        pins.push_back(Pin{eta, uniform_in(rng, -1.0, 1.0)});
    }
    return GaussianInstance{GaussianFunctional{k, g, pins, Normalization::constant(1.0)}, f};
}

AtomicMeasure random_measure(NormalRng& rng, int max_atoms, double beta_max,
                             bool complex_weights) {
    AtomicMeasure m;
    const int count = 1 + static_cast<int>(uniform_in(rng, 0.0, 0.999) * max_atoms);
    for (int j = 0; j < count; ++j) {
        const double beta = uniform_in(rng, -beta_max, beta_max);
        const double re = uniform_in(rng, -1.0, 1.0);
        const double im = complex_weights ? uniform_in(rng, -1.0, 1.0) : 0.0;
        m.atoms.push_back({beta, complex(re, im)});
    }
    return m;
}

PhysParams random_conserved_params(NormalRng& rng, double p_min, double p_max) {
    PhysParams params;
    params.p0 = uniform_in(rng, p_min, p_max) * (rng.uniform01() < 0.5 ? -1.0 : 1.0);
    params.p1 = params.p0;
    params.set_alpha(uniform_in(rng, -2.0, 2.0));
    params.t0 = uniform_in(rng, 0.0, 1.0);
    params.t = params.t0 + uniform_in(rng, 0.5, 5.0);
    params.a = params.delta() / 3.0;
    return params;
}

namespace {

SuiteResult suite_oracle_equivalence(const RunConfig& config) {
    NormalRng rng(config.seed ^ 0x6f72636cULL);
    double worst_rel = 0.0;
    for (int i = 0; i < 12; ++i) {
        const GaussianInstance inst = random_gaussian_instance(rng);
        const complex lemma = t_transform_lemma(inst.phi, inst.f);
        const complex oracle = t_transform_oracle(inst.phi, inst.f, 1e-3);
        worst_rel = std::max(worst_rel, std::abs(lemma - oracle) / std::abs(lemma));
    }
    // Nascent-delta convergence order: the gap shrinks ~ sigma^2.
    double ratio_lo = 1e9, ratio_hi = 0.0;
    int rated = 0;
    for (int i = 0; i < 6 && rated < 4; ++i) {
        const GaussianInstance inst = random_gaussian_instance(rng, 12, 1 + (i % 2));
        const complex lemma = t_transform_lemma(inst.phi, inst.f);
        const double err_coarse = std::abs(t_transform_oracle(inst.phi, inst.f, 1e-2) - lemma);
        const double err_fine = std::abs(t_transform_oracle(inst.phi, inst.f, 1e-3) - lemma);
        if (err_fine < 1e-13 * std::abs(lemma)) continue;  // below the floor, no rate
        const double ratio = err_coarse / err_fine;
        ratio_lo = std::min(ratio_lo, ratio);
        ratio_hi = std::max(ratio_hi, ratio);
        ++rated;
    }
    const bool ratios_ok = rated == 0 || (ratio_lo > 20.0 && ratio_hi < 500.0);
    return SuiteResult{"oracle-equivalence", worst_rel <= 1e-4 && ratios_ok,
                       fmt("max rel err %.3g at sigma 1e-3 (limit 1e-4); sigma ratios in "
                           "[%.3g, %.3g]",
                           worst_rel, rated ? ratio_lo : 0.0, rated ? ratio_hi : 0.0)};
}

SuiteResult suite_action_consistency(const RunConfig& config) {
    PhysParams params = config.params;
    params.set_alpha(0.3);
    params.p0 = 1.3;
    double mean[3] = {0.0, 0.0, 0.0};
    const int samples = 20;
    for (int s = 0; s < samples; ++s) {
        const TimeGrid base(params.t0, params.t, 64);
        const NoiseSample noise = sample_noise(base, config.seed + 1000 + s);
        for (int level = 0; level < 3; ++level) {
            const NoiseSample refined{refine(noise.values, 1 << level), noise.seed};
            mean[level] += std::abs(action_direct(params, refined) -
                                    action_closed(params, refined));
        }
    }
    for (double& m : mean) m /= samples;
    const double r1 = mean[0] / mean[1];
    const double r2 = mean[1] / mean[2];
    const bool ok = r1 > 1.7 && r1 < 2.3 && r2 > 1.7 && r2 < 2.3;
    return SuiteResult{"action-consistency", ok,
                       fmt("defect ratios per grid doubling: %.3f, %.3f (want 2.0 +- 0.3)",
                           r1, r2)};
}

SuiteResult suite_nascent_delta(const RunConfig& config) {
    PhysParams params = config.params;
    params.p1 = params.p0;
    const TimeGrid grid(params.t0, params.t, 8);
    const GridFunction zero(grid, 2);
    const complex target = propagator_limit(params).phase;

    bool ok = true;
    std::string detail;
    for (double eps : config.eps_list) {
        const double width = std::sqrt(eps * params.hbar * params.m0 / params.delta());
        const double lo = params.p0 - 8.0 * width, hi = params.p0 + 8.0 * width;
        const int n_pts = 4001;
        const double h = (hi - lo) / (n_pts - 1);
        const auto value_at = [&](double q) {
            PhysParams local = params;
            local.p1 = q;
            return t_transform_eps(local, grid, eps, zero);
        };
        complex integral = value_at(lo) + value_at(hi);
        for (int i = 1; i < n_pts - 1; ++i)
            integral += value_at(lo + i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
        integral *= h / 3.0;
        const double rel = std::abs(integral - target) / std::abs(target);
        if (!(rel <= 10.0 * eps)) ok = false;
        detail += fmt("eps %.1g: rel err %.3g (limit %.1g); ", eps, rel, 10.0 * eps);
    }
    return SuiteResult{"nascent-delta", ok, detail};
}

SuiteResult suite_poisson(const RunConfig& config) {
    const int trunc = std::max(12, config.comb_truncation);
    double max_diff = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = -2.5 + 5.0 * i / 999.0;
        max_diff = std::max(max_diff, std::abs(poisson_comb_lhs(x, 1.0, 0.1, trunc) -
                                               poisson_comb_rhs(x, 1.0, 0.1, trunc)));
    }
    const double center = poisson_comb_lhs(0.0, 1.0, 0.1, trunc);
    const double center_want = 1.0 / (0.1 * std::sqrt(2.0 * kPi));
    double max_diff_ratio = 0.0;
    for (double ratio : {0.05, 0.5}) {
        const int adaptive = static_cast<int>(std::ceil(1.0 / ratio)) + 12;
        for (int i = 0; i < 300; ++i) {
            const double x = -1.5 + 3.0 * i / 299.0;
            max_diff_ratio = std::max(
                max_diff_ratio, std::abs(poisson_comb_lhs(x, 1.0, ratio, adaptive) -
                                         poisson_comb_rhs(x, 1.0, ratio, adaptive)));
        }
    }
    const bool ok = max_diff <= 1e-6 && std::abs(center - center_want) <= 1e-4 &&
                    max_diff_ratio <= 1e-6;
    return SuiteResult{"poisson", ok,
                       fmt("max |lhs-rhs| %.3g (limit 1e-6); center %.7f", max_diff, center)};
}

SuiteResult suite_schrodinger_residual(const RunConfig& config) {
    NormalRng rng(config.seed ^ 0x73636872ULL);
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
        PhysParams params = random_conserved_params(rng);
        worst = std::max(worst, residual_analytic(ab_spec(params)));
        PhysParams free_params = params;
        free_params.phi = 0.0;
        worst = std::max(worst, residual_analytic(circle_spec(free_params)));
        const AtomicMeasure m = random_measure(rng, 5, 1.0, false);
        worst = std::max(worst, residual_analytic(exponential_spec(params, m)));
    }
    double rate_lo = 10.0, rate_hi = 0.0;
    for (int i = 0; i < 5; ++i) {
        PhysParams params = random_conserved_params(rng, 1.2, 3.0);
        const EnergySpec spec = ab_spec(params);
        const double r2 = residual_fd(spec, 1e-2);
        const double r3 = residual_fd(spec, 1e-3);
        const double r4 = residual_fd(spec, 1e-4);
        rate_lo = std::min({rate_lo, std::log10(r2 / r3), std::log10(r3 / r4)});
        rate_hi = std::max({rate_hi, std::log10(r2 / r3), std::log10(r3 / r4)});
    }
    const bool ok = worst <= 1e-12 && rate_lo >= 1.8 && rate_hi <= 2.2;
    return SuiteResult{"schrodinger-residual", ok,
                       fmt("max analytic residual %.3g (limit 1e-12); fd rate in [%.2f, %.2f]",
                           worst, rate_lo, rate_hi)};
}

SuiteResult suite_series_bound(const RunConfig& config) {
    NormalRng rng(config.seed ^ 0x73657269ULL);

    // Frozen single-atom case: the order-3 tail of exp(-i).
    PhysParams unit;
    AtomicMeasure delta0;
    delta0.atoms.push_back({0.0, 1.0});
    const SeriesResult s3 = series_propagator(unit, delta0, 3);
    const PropagatorValue exact = closed_form_propagator(unit, delta0);
    const double err3 = std::abs(s3.value.phase - exact.phase);
    bool ok = std::abs(err3 - 0.0411) <= 1e-3 && err3 <= s3.report.remainder_bound &&
              std::abs(s3.report.remainder_bound - 0.1133) <= 1e-3;

    // Partial sums must stay below the global bound, and the actual error
    // below the reported remainder, at every order.
    int violations = 0;
    for (int draw = 0; draw < 200; ++draw) {
        PhysParams params = random_conserved_params(rng, 0.3, 1.5);
        params.t = params.t0 + uniform_in(rng, 0.2, 1.5);
        params.a = params.delta() / 3.0;
        const AtomicMeasure m = random_measure(rng, 5, 1.5, true);
        const PropagatorValue closed = closed_form_propagator(params, m);
        const double bound =
            series_global_bound(params, m, std::abs(params.p1) / (params.m0 * params.R));
        const complex phase0 = std::exp(complex(0.0, -1.0) * params.p0 * params.p0 *
                                        params.delta() / (2.0 * params.m0 * params.hbar));
        for (int order = 0; order <= 25; order += 5) {
            const SeriesResult sr = series_propagator(params, m, order);
            if (std::abs(sr.value.phase) / std::abs(phase0) > bound * (1.0 + 1e-12))
                ++violations;
            // The bound can only be checked down to the rounding floor of the
            // compared phases.
            const double floor = 32.0 * std::numeric_limits<double>::epsilon() *
                                 (std::abs(sr.value.phase) + std::abs(closed.phase));
            if (std::abs(sr.value.phase - closed.phase) >
                sr.report.remainder_bound * (1.0 + 1e-9) + floor)
                ++violations;
        }
    }

    // Interaction-factor dominance over random draws.
    int g_violations = 0;
    for (int draw = 0; draw < 300; ++draw) {
        PhysParams params = random_conserved_params(rng, 0.3, 3.0);
        const TimeGrid grid(params.t0, params.t, 16);
        GridFunction phi(grid, 2);
        for (int c = 0; c < 2; ++c)
            for (int cell = 0; cell < 16; ++cell) phi.at(c, cell) = uniform_in(rng, -1.0, 1.0);
        const int n_terms = static_cast<int>(uniform_in(rng, 0.0, 6.0));
        std::vector<double> s_list, beta_list;
        for (int j = 0; j < n_terms; ++j) {
            s_list.push_back(uniform_in(rng, params.t0, params.t));
            beta_list.push_back(uniform_in(rng, -3.0, 3.0));
        }
        if (std::abs(g_n_eval(params, phi, s_list, beta_list)) >
            g_n_bound(params, phi, beta_list) * (1.0 + 1e-12))
            ++g_violations;
    }
    ok = ok && violations == 0 && g_violations == 0;
    return SuiteResult{"series-bound", ok,
                       fmt("order-3 tail %.4f (want 0.0411); bound violations %g + %g (want 0)",
                           err3, static_cast<double>(violations),
                           static_cast<double>(g_violations))};
}

SuiteResult suite_winding_reduction(const RunConfig& config) {
    NormalRng rng(config.seed ^ 0x77696e64ULL);
    double worst_phase = 0.0;
    bool iff_ok = true;
    for (int i = 0; i < 20; ++i) {
        PhysParams params = random_conserved_params(rng, 0.2, 5.0);
        const PropagatorValue wind = propagator_winding(params, 8);
        const PropagatorValue plain = propagator_no_winding(params);
        worst_phase = std::max(worst_phase, std::abs(wind.phase - plain.phase));
        if (winding_residual_term(params, i % 4) != complex(0.0)) iff_ok = false;
        PhysParams off = params;
        off.p1 = params.p0 + 0.3;
        if (std::abs(winding_residual_term(off, i % 4)) == 0.0) iff_ok = false;
    }
    double worst_dirichlet = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double x = uniform_in(rng, 0.01, 2.0 * kPi - 0.01);
        if (std::abs(std::sin(0.5 * x)) < 1e-3) continue;
        WindingComb comb{x, 0, 8};
        worst_dirichlet = std::max(
            worst_dirichlet, std::abs(comb.partial_sum(11).real() - dirichlet_kernel(x, 11)));
    }
    const bool ok = worst_phase <= 1e-12 && iff_ok && worst_dirichlet <= 1e-10;
    return SuiteResult{"winding-reduction", ok,
                       fmt("max phase gap %.3g (limit 1e-12); dirichlet gap %.3g", worst_phase,
                           worst_dirichlet)};
}

}  // namespace

std::vector<std::string> verification_suite_names() {
    return {"oracle-equivalence", "action-consistency", "nascent-delta",        "poisson",
            "schrodinger-residual", "series-bound",      "winding-reduction"};
}

std::vector<SuiteResult> run_verification_suites(const RunConfig& config,
                                                 const std::vector<std::string>& only) {
    config.validate();
    using SuiteFn = std::function<SuiteResult(const RunConfig&)>;
    const std::vector<std::pair<std::string, SuiteFn>> suites = {
        {"oracle-equivalence", suite_oracle_equivalence},
        {"action-consistency", suite_action_consistency},
        {"nascent-delta", suite_nascent_delta},
        {"poisson", suite_poisson},
        {"schrodinger-residual", suite_schrodinger_residual},
        {"series-bound", suite_series_bound},
        {"winding-reduction", suite_winding_reduction},
    };
    for (const std::string& name : only) {
        bool known = false;
        for (const auto& [sname, fn] : suites) known = known || sname == name;
        if (!known) throw ConfigError("suite", "unknown suite '" + name + "'");
    }
    std::vector<SuiteResult> results;
    for (const auto& [name, fn] : suites) {
        if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
        results.push_back(fn(config));
    }
    return results;
}

}  // namespace abprop
