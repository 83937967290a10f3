#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "abprop/config.hpp"
#include "abprop/measure.hpp"
#include "abprop/perturbation.hpp"
#include "abprop/propagators.hpp"
#include "abprop/table.hpp"
#include "abprop/verify.hpp"

namespace {

using namespace abprop;

void write_output(const Table& table, const RunConfig& config) {
    const std::string text = config.format == "json" ? to_json(table) : to_csv(table);
    if (config.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) throw ConfigError("out", "cannot open " + config.out_path + " for writing");
    out << text;
}

int cmd_verify(const RunConfig& config, const std::vector<std::string>& suites) {
    const std::vector<SuiteResult> results = run_verification_suites(config, suites);
    int failures = 0;
    for (const SuiteResult& r : results) {
        std::printf("%s %-21s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        if (!r.passed) ++failures;
    }
    std::printf("%d/%zu suites passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}

bool flux_detectable(double alpha) {
    return std::abs(alpha - std::round(alpha)) > 1e-9;
}

int cmd_sweep(RunConfig config) {
    if (!config.sweep) throw ConfigError("sweep", "sweep spec required (VAR:MIN:MAX:STEPS)");
    config.validate();
    const SweepSpec& spec = *config.sweep;
    const bool flux_sweep = spec.variable == "phi" || spec.variable == "alpha";

    Table table;
    if (spec.variable == "eps")
        table.columns = {"index", "eps", "value_re", "value_im", "value_abs"};
    else if (flux_sweep)
        table.columns = {"index", spec.variable, "phase_re", "phase_im", "phase_arg",
                         "detectable"};
    else
        table.columns = {"index", spec.variable, "phase_re", "phase_im", "phase_arg"};

    for (int i = 0; i < spec.steps; ++i) {
        const double v = (spec.steps == 1)
                             ? spec.min
                             : spec.min + (spec.max - spec.min) * i / (spec.steps - 1);
        PhysParams p = config.params;
        if (spec.variable == "phi") p.phi = v;
        else if (spec.variable == "alpha") p.set_alpha(v);
        else if (spec.variable == "t") p.t = v;
        else if (spec.variable == "p0") p.p0 = v;
        else if (spec.variable == "p1") p.p1 = v;
        try {
            p.validate();
        } catch (const std::domain_error& err) {
            throw ConfigError("sweep", "point " + std::to_string(i) + ": " + err.what());
        }

        if (spec.variable == "eps") {
            const TimeGrid grid(p.t0, p.t, config.n_cells);
            const GridFunction zero(grid, 2);
            const complex value = t_transform_eps(p, grid, v, zero);
            table.add_row({static_cast<long long>(i), v, value.real(), value.imag(),
                           std::abs(value)});
        } else {
            const PropagatorValue prop = propagator_no_winding(p);
            if (flux_sweep)
                table.add_row({static_cast<long long>(i), v, prop.phase.real(),
                               prop.phase.imag(), std::arg(prop.phase),
                               static_cast<long long>(flux_detectable(p.alpha()) ? 1 : 0)});
            else
                table.add_row({static_cast<long long>(i), v, prop.phase.real(),
                               prop.phase.imag(), std::arg(prop.phase)});
        }
    }
    write_output(table, config);
    return 0;
}

int cmd_series(RunConfig config) {
    config.validate();
    AtomicMeasure measure;
    if (!config.measure_path.empty()) {
        try {
            measure = load_measure_file(config.measure_path);
        } catch (const std::runtime_error& err) {
            throw ConfigError("measure", err.what());
        }
    }
    const PropagatorValue closed = closed_form_propagator(config.params, measure);
    const double c_const =
        std::abs(config.params.p1) / (config.params.m0 * config.params.R);
    const double global_bound = series_global_bound(config.params, measure, c_const);

    Table table;
    table.columns = {"order", "partial_re", "partial_im", "phase_re", "phase_im",
                     "true_error", "remainder_bound", "global_bound"};
    // An empty measure has no interaction: every order equals the free phase.
    const int last_order = measure.empty() ? 0 : config.series_order_max;
    for (int order = 0; order <= last_order; ++order) {
        const SeriesResult sr = series_propagator(config.params, measure, order);
        table.add_row({static_cast<long long>(order), sr.report.partial_sum.real(),
                       sr.report.partial_sum.imag(), sr.value.phase.real(),
                       sr.value.phase.imag(), std::abs(sr.value.phase - closed.phase),
                       sr.report.remainder_bound, global_bound});
    }
    write_output(table, config);
    return 0;
}

int cmd_poisson_demo(RunConfig config, double sigma, double period, int truncation,
                     int points) {
    config.validate();
    if (!(sigma > 0.0)) throw ConfigError("sigma", "must be > 0");
    if (!(period > 0.0)) throw ConfigError("period", "must be > 0");
    if (truncation < 0) throw ConfigError("truncation", "must be >= 0");
    if (points < 2) throw ConfigError("points", "must be >= 2");

    Table table;
    table.columns = {"x", "lhs", "rhs", "abs_diff"};
    double max_diff = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = -2.5 * period + 5.0 * period * i / (points - 1);
        const double lhs = poisson_comb_lhs(x, period, sigma, truncation);
        const double rhs = poisson_comb_rhs(x, period, sigma, truncation);
        max_diff = std::max(max_diff, std::abs(lhs - rhs));
        table.add_row({x, lhs, rhs, std::abs(lhs - rhs)});
    }
    write_output(table, config);
    std::fprintf(stderr, "poisson-demo: max |lhs - rhs| = %s over %d points\n",
                 format_full(max_diff).c_str(), points);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Momentum-space propagators for a charged particle on a circle "
                 "around an excluded magnetic flux"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path, format, eps_text, sigma_text;
    std::uint64_t seed = 0;
    double p0 = 0, p1 = 0, phi = 0, alpha = 0, a = 0, t0 = 0, t_end = 0;
    int n_cells = 0, order_max = -1;

    auto* opt_config = app.add_option("--config", config_path, "flat key = value config file");
    auto* opt_out = app.add_option("--out", out_path, "output file (default stdout)");
    auto* opt_format = app.add_option("--format", format, "csv or json")
                           ->check(CLI::IsMember({"csv", "json"}));
    auto* opt_seed = app.add_option("--seed", seed, "RNG seed");
    auto* opt_p0 = app.add_option("--p0", p0, "initial conjugate momentum");
    auto* opt_p1 = app.add_option("--p1", p1, "pinned final conjugate momentum");
    auto* opt_phi = app.add_option("--phi", phi, "magnetic flux");
    auto* opt_alpha = app.add_option("--alpha", alpha, "flux parameter (sets phi)");
    auto* opt_a = app.add_option("--a", a, "entry-time offset");
    auto* opt_t0 = app.add_option("--t0", t0, "start time");
    auto* opt_t = app.add_option("--t", t_end, "end time");
    auto* opt_n = app.add_option("--n-cells", n_cells, "lattice cells");
    auto* opt_order = app.add_option("--order", order_max, "max series order");

    auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
    std::vector<std::string> suites;
    verify_cmd->add_option("--suite", suites, "run only the named suite (repeatable)");

    auto* sweep_cmd = app.add_subcommand("sweep", "tabulate a parameter sweep");
    std::string sweep_text;
    sweep_cmd->add_option("--sweep", sweep_text, "VAR:MIN:MAX:STEPS");

    auto* series_cmd = app.add_subcommand("series", "tabulate the perturbation series");
    std::string measure_path;
    series_cmd->add_option("--measure", measure_path, "atom file: beta weight_re weight_im");

    auto* poisson_cmd = app.add_subcommand("poisson-demo", "tabulate both comb regularizations");
    double comb_sigma = 0.1, comb_period = 1.0;
    int comb_truncation = 12, comb_points = 201;
    poisson_cmd->add_option("--comb-sigma", comb_sigma, "bump width");
    poisson_cmd->add_option("--period", comb_period, "comb period");
    poisson_cmd->add_option("--truncation", comb_truncation, "comb truncation");
    poisson_cmd->add_option("--points", comb_points, "x-grid points");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig config;
        if (opt_config->count()) apply_config_file(config, config_path);
        if (opt_out->count()) config.out_path = out_path;
        if (opt_format->count()) config.format = format;
        if (opt_seed->count()) config.seed = seed;
        if (opt_p0->count()) config.params.p0 = p0;
        if (opt_p1->count()) config.params.p1 = p1;
        if (opt_phi->count()) config.params.phi = phi;
        if (opt_alpha->count()) config.params.set_alpha(alpha);
        if (opt_a->count()) config.params.a = a;
        if (opt_t0->count()) config.params.t0 = t0;
        if (opt_t->count()) config.params.t = t_end;
        if (opt_n->count()) config.n_cells = n_cells;
        if (opt_order->count()) config.series_order_max = order_max;
        if (!sweep_text.empty()) config.sweep = parse_sweep_spec(sweep_text);
        if (!measure_path.empty()) config.measure_path = measure_path;

        if (verify_cmd->parsed()) {
            config.validate();
            return cmd_verify(config, suites);
        }
        if (sweep_cmd->parsed()) return cmd_sweep(config);
        if (series_cmd->parsed()) return cmd_series(config);
        if (poisson_cmd->parsed())
            return cmd_poisson_demo(config, comb_sigma, comb_period, comb_truncation,
                                    comb_points);
    } catch (const ConfigError& err) {
        std::fprintf(stderr, "%s\n", err.what());
        return 2;
    } catch (const std::domain_error& err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return 2;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "config error: %s\n", err.what());
        return 2;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
