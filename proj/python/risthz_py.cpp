#include <optional>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "risthz/analysis.hpp"
#include "risthz/atmosphere.hpp"
#include "risthz/config.hpp"
#include "risthz/harness.hpp"

namespace py = pybind11;
using namespace risthz;

namespace {

AtmosphereConfig atmosphere(double humidity, double pressure, double temperature)
{
    return AtmosphereConfig{humidity, pressure, temperature};
}

std::optional<SweepSpec> sweep_arg(const std::optional<std::string> &s)
{
    if (!s)
        return std::nullopt;
    return parse_sweep(*s);
}

py::list rows_to_py(const ExperimentResult &r)
{
    py::list out;
    for (const auto &row : r.rows) {
        py::dict d;
        d["sweep_var"] = row.sweep_var;
        d["sweep_value"] = row.sweep_value;
        d["solver"] = row.solver;
        d["metric"] = row.metric;
        d["mean"] = row.mean;
        d["ci95"] = row.ci95;
        d["trials"] = row.trials;
        d["failed"] = row.failed;
        d["seed"] = row.seed;
        out.append(d);
    }
    return out;
}

OneElementParams one_element(double Lp, double Mp, double Np, double Pp, double s, double t)
{
    OneElementParams p{Lp, Mp, Np, Pp, s, t, 0.0};
    p.validate();
    return p;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "RIS-aided THz link simulator core";

    // Translators run newest first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "absorption_coefficient",
        [](double f, double humidity, double pressure, double temperature) {
            return absorption_coefficient(f, atmosphere(humidity, pressure, temperature));
        },
        py::arg("frequency_hz"), py::arg("humidity_percent") = 50.0, py::arg("pressure_hpa") = 1013.25,
        py::arg("temperature_c") = 27.0, "Molecular absorption coefficient k(f) in 1/m.");
    m.def(
        "transmittance",
        [](double f, double d, double humidity, double pressure, double temperature) {
            return transmittance(f, d, atmosphere(humidity, pressure, temperature));
        },
        py::arg("frequency_hz"), py::arg("distance_m"), py::arg("humidity_percent") = 50.0,
        py::arg("pressure_hpa") = 1013.25, py::arg("temperature_c") = 27.0, "exp(-k(f) d).");

    m.def(
        "one_element_sinr",
        [](double Lp, double Mp, double Np, double Pp, double s, double t, double x) {
            return one_element_sinr(one_element(Lp, Mp, Np, Pp, s, t), x);
        },
        py::arg("Lp"), py::arg("Mp"), py::arg("Np"), py::arg("Pp"), py::arg("s"), py::arg("t"), py::arg("x"));
    m.def(
        "stationary_values",
        [](double Lp, double Mp, double Np, double Pp, double s, double t) {
            const StationaryValues v = stationary_values(one_element(Lp, Mp, Np, Pp, s, t));
            return py::make_tuple(v.lower, v.upper);
        },
        py::arg("Lp"), py::arg("Mp"), py::arg("Np"), py::arg("Pp"), py::arg("s"), py::arg("t"),
        "(lower, upper) stationary values of the one-element SINR.");
    m.def(
        "sa_gap",
        [](double k, double delta, double c) {
            const SaGap g = sa_gap(k, delta, c);
            return py::make_tuple(g.g1, g.g2);
        },
        py::arg("k"), py::arg("delta"), py::arg("c"));
    m.def(
        "run_oracle_checks",
        [](std::uint64_t seed, int instances) {
            OracleOptions o;
            o.seed = seed;
            o.instances = instances;
            py::list out;
            for (const auto &c : run_oracle_checks(o))
                out.append(py::make_tuple(c.name, c.passed, c.detail));
            return out;
        },
        py::arg("seed") = 7, py::arg("instances") = 200);

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def(
            "set", [](RunConfig &c, const std::string &k, const std::string &v) { apply_setting(c, k, v); },
            py::arg("key"), py::arg("value"), "Set one field by name (section.key, bare key, or alias).")
        .def("validate", &RunConfig::validate)
        .def_property_readonly("ris_elements", [](const RunConfig &c) { return c.scenario.ris_elements; })
        .def_property_readonly("rx_antennas", [](const RunConfig &c) { return c.scenario.rx_antennas; })
        .def_property_readonly("interferers", [](const RunConfig &c) { return c.scenario.interferers; })
        .def_property_readonly("frequency_hz", [](const RunConfig &c) { return c.scenario.frequency_hz; })
        .def_property_readonly("solver", [](const RunConfig &c) { return solver_name(c.solver.sub_solver); })
        .def_property_readonly("trials", [](const RunConfig &c) { return c.experiment.trials; })
        .def_property_readonly("seed", [](const RunConfig &c) { return c.experiment.seed; });
    m.def("load_config", &load_config, py::arg("path"));
    m.def("parse_config", &parse_config, py::arg("text"));

    m.def(
        "run_throughput",
        [](const RunConfig &c, const std::optional<std::string> &sweep) {
            ExperimentResult r;
            {
                py::gil_scoped_release nogil;
                r = run_throughput(c, sweep_arg(sweep));
            }
            return rows_to_py(r);
        },
        py::arg("config"), py::arg("sweep") = std::nullopt);
    m.def(
        "run_ser",
        [](const RunConfig &c, const std::optional<std::string> &sweep) {
            ExperimentResult r;
            {
                py::gil_scoped_release nogil;
                r = run_ser(c, sweep_arg(sweep));
            }
            return rows_to_py(r);
        },
        py::arg("config"), py::arg("sweep") = std::nullopt);
    m.def(
        "run_runtime",
        [](const RunConfig &c, const std::optional<std::string> &sweep, const std::vector<std::string> &solvers) {
            std::vector<RisSolver> s;
            for (const auto &name : solvers)
                s.push_back(parse_solver(name));
            ExperimentResult r;
            {
                py::gil_scoped_release nogil;
                r = run_runtime(c, sweep_arg(sweep), s);
            }
            return rows_to_py(r);
        },
        py::arg("config"), py::arg("sweep") = std::nullopt,
        py::arg("solvers") = std::vector<std::string>{"gd", "sa", "sdr"});

    m.def(
        "optimize_trial",
        [](const RunConfig &c, std::uint64_t trial) {
            const TrialChannels tc = draw_trial(c.scenario, c.experiment.seed, trial);
            const SinrContext opt = optimization_context(c.scenario, tc);
            Rng rng = Rng::for_trial(c.experiment.seed, trial, Stream::optimizer);
            const OptimizationResult r = bcd(opt, c.solver, rng);
            py::dict d;
            d["u"] = CVec(r.u);
            d["phi"] = RVec(r.phases.phi);
            d["gamma_trace"] = r.gamma_trace;
            d["outer_iters"] = r.outer_iters;
            d["converged"] = r.converged;
            d["true_sinr"] = sinr(r.u, r.phases, evaluation_context(c.scenario, tc));
            return d;
        },
        py::arg("config"), py::arg("trial") = 0,
        "Draw one trial and run BCD; returns u, phi, the SINR trace and the true-channel SINR.");
}
