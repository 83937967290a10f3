#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "abprop/config.hpp"
#include "abprop/perturbation.hpp"
#include "abprop/propagators.hpp"
#include "abprop/schrodinger.hpp"
#include "abprop/verify.hpp"

namespace py = pybind11;
using namespace abprop;

PYBIND11_MODULE(abprop, m) {
    m.doc() = "Momentum-space propagators for a charged particle on a circle around "
              "an excluded magnetic flux";

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, double, int>(), py::arg("t0"), py::arg("t"), py::arg("n_cells"))
        .def_readonly("t0", &TimeGrid::t0)
        .def_readonly("t", &TimeGrid::t)
        .def_readonly("n_cells", &TimeGrid::n_cells)
        .def("dt", &TimeGrid::dt)
        .def("delta", &TimeGrid::delta)
        .def("cell_of", &TimeGrid::cell_of);

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<const TimeGrid&, int>(), py::arg("grid"), py::arg("components") = 2)
        .def_property_readonly("grid", &GridFunction::grid)
        .def_property_readonly("components", &GridFunction::components)
        .def("get", [](const GridFunction& f, int c, int i) { return f.at(c, i); })
        .def("set", [](GridFunction& f, int c, int i, complex v) { f.at(c, i) = v; });

    m.def("indicator", &indicator, py::arg("grid"), py::arg("a"), py::arg("b"),
          py::arg("component"), py::arg("components") = 2);
    m.def("point_mass", &point_mass, py::arg("grid"), py::arg("s"), py::arg("component"),
          py::arg("components") = 2);
    m.def("inner_product", &inner_product);

    py::class_<NoiseSample>(m, "NoiseSample")
        .def_readonly("values", &NoiseSample::values)
        .def_readonly("seed", &NoiseSample::seed);
    m.def("sample_noise", &sample_noise, py::arg("grid"), py::arg("seed"));

    py::class_<PhysParams>(m, "PhysParams")
        .def(py::init<>())
        .def_readwrite("m0", &PhysParams::m0)
        .def_readwrite("R", &PhysParams::R)
        .def_readwrite("hbar", &PhysParams::hbar)
        .def_readwrite("c", &PhysParams::c)
        .def_readwrite("e", &PhysParams::e)
        .def_readwrite("phi", &PhysParams::phi)
        .def_readwrite("p0", &PhysParams::p0)
        .def_readwrite("p1", &PhysParams::p1)
        .def_readwrite("t0", &PhysParams::t0)
        .def_readwrite("t", &PhysParams::t)
        .def_readwrite("a", &PhysParams::a)
        .def("alpha", &PhysParams::alpha)
        .def("set_alpha", &PhysParams::set_alpha)
        .def("a_value", &PhysParams::a_value)
        .def("delta", &PhysParams::delta)
        .def("validate", &PhysParams::validate);

    py::class_<WindingComb>(m, "WindingComb")
        .def_readonly("argument", &WindingComb::argument)
        .def_readonly("l0", &WindingComb::l0)
        .def("partial_sum", py::overload_cast<int>(&WindingComb::partial_sum, py::const_))
        .def("partial_sum", py::overload_cast<>(&WindingComb::partial_sum, py::const_));

    py::class_<PropagatorValue>(m, "PropagatorValue")
        .def_readonly("delta_arg", &PropagatorValue::delta_arg)
        .def_readonly("phase", &PropagatorValue::phase)
        .def_readonly("comb", &PropagatorValue::comb);

    m.def("dirichlet_kernel", &dirichlet_kernel);
    m.def("propagator_limit", &propagator_limit);
    m.def("propagator_no_winding", &propagator_no_winding);
    m.def("propagator_winding", &propagator_winding, py::arg("params"),
          py::arg("truncation"));
    m.def("poisson_comb_lhs", &poisson_comb_lhs, py::arg("x"), py::arg("period"),
          py::arg("sigma"), py::arg("truncation"));
    m.def("poisson_comb_rhs", &poisson_comb_rhs, py::arg("x"), py::arg("period"),
          py::arg("sigma"), py::arg("truncation"));
    m.def("ab_period_check", &ab_period_check);

    m.def("action_closed", &action_closed);
    m.def("action_direct", &action_direct);
    m.def(
        "t_transform_eps",
        [](const PhysParams& p, const TimeGrid& grid, double eps, const GridFunction* f) {
            if (f) return t_transform_eps(p, grid, eps, *f);
            return t_transform_eps(p, grid, eps, GridFunction(grid, 2));
        },
        py::arg("params"), py::arg("grid"), py::arg("eps"), py::arg("f") = nullptr);

    py::class_<MeasureAtom>(m, "MeasureAtom")
        .def(py::init([](double beta, complex weight) {
                 return MeasureAtom{beta, weight};
             }),
             py::arg("beta"), py::arg("weight"))
        .def_readwrite("beta", &MeasureAtom::beta)
        .def_readwrite("weight", &MeasureAtom::weight);

    py::class_<AtomicMeasure>(m, "AtomicMeasure")
        .def(py::init([](const std::vector<std::pair<double, complex>>& atoms) {
                 AtomicMeasure out;
                 for (const auto& [beta, weight] : atoms) out.atoms.push_back({beta, weight});
                 return out;
             }),
             py::arg("atoms") = std::vector<std::pair<double, complex>>{})
        .def_readwrite("atoms", &AtomicMeasure::atoms)
        .def("moment", &AtomicMeasure::moment)
        .def("empty", &AtomicMeasure::empty);

    m.def("potential_eval", &potential_eval);
    m.def("parse_measure_text", &parse_measure_text, py::arg("text"), py::arg("origin") = "");

    py::enum_<PropagatorKind>(m, "PropagatorKind")
        .value("ab_bound_state", PropagatorKind::ab_bound_state)
        .value("circle", PropagatorKind::circle)
        .value("exponential_class", PropagatorKind::exponential_class);

    py::class_<EnergySpec>(m, "EnergySpec")
        .def_readonly("kind", &EnergySpec::kind)
        .def_readonly("params", &EnergySpec::params)
        .def_readonly("measure", &EnergySpec::measure)
        .def("energy", &EnergySpec::energy);
    m.def("ab_spec", &ab_spec);
    m.def("circle_spec", &circle_spec);
    m.def("exponential_spec", &exponential_spec);
    m.def("w_kernel", &w_kernel, py::arg("spec"), py::arg("dp"), py::arg("p_at"));
    m.def("residual_analytic", &residual_analytic);
    m.def("residual_fd", &residual_fd, py::arg("spec"), py::arg("dt_fd"));
    m.def("winding_residual_term", &winding_residual_term);

    py::class_<TruncationReport>(m, "TruncationReport")
        .def_readonly("x", &TruncationReport::x)
        .def_readonly("order", &TruncationReport::order)
        .def_readonly("partial_sum", &TruncationReport::partial_sum)
        .def_readonly("remainder_bound", &TruncationReport::remainder_bound);
    py::class_<SeriesResult>(m, "SeriesResult")
        .def_readonly("value", &SeriesResult::value)
        .def_readonly("report", &SeriesResult::report);

    m.def("series_propagator", &series_propagator, py::arg("params"), py::arg("measure"),
          py::arg("order"));
    m.def("closed_form_propagator", &closed_form_propagator);
    m.def("series_global_bound", &series_global_bound);
    m.def("g_n_eval", &g_n_eval);
    m.def("g_n_bound", &g_n_bound);

    py::class_<ABReduction>(m, "ABReduction")
        .def_readonly("k", &ABReduction::k)
        .def_readonly("n", &ABReduction::n)
        .def_readonly("coupling", &ABReduction::coupling)
        .def_readonly("B", &ABReduction::B)
        .def_readonly("b", &ABReduction::b)
        .def_readonly("alpha_frac", &ABReduction::alpha_frac)
        .def_readonly("detectable", &ABReduction::detectable);
    m.def("make_ab_reduction", &make_ab_reduction);
    m.def("first_order_potential", &first_order_potential);
    m.def("potential_series", &potential_series, py::arg("reduction"), py::arg("theta_dot"),
          py::arg("order"), py::arg("sign") = -1.0);
    m.def("ab_linear_coefficient", &ab_linear_coefficient);

    m.def(
        "run_verification",
        [](std::uint64_t seed) {
            RunConfig config;
            config.seed = seed;
            std::vector<std::tuple<std::string, bool, std::string>> out;
            for (const SuiteResult& r : run_verification_suites(config))
                out.emplace_back(r.name, r.passed, r.detail);
            return out;
        },
        py::arg("seed") = 12345);
}
