// bindings.cpp — Python module exposing states, entanglement measures, rates, the oracle and scenario runs

#include "nldiss/experiments.hpp"
#include "nldiss/oracle.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace nldiss;

namespace {

DensityMatrix as_density(const ComplexMatrix& rho, int cutoff)
{
    return DensityMatrix(TruncatedSpace(cutoff), rho);
}

py::dict record_dict(const BlochRecord& r)
{
    py::dict d;
    d["p00"] = r.p00;
    d["p10"] = r.p10;
    d["p01"] = r.p01;
    d["s"] = r.s;
    d["u"] = r.u;
    d["v"] = r.v;
    d["w"] = r.w;
    return d;
}

// Trajectory as a dict of equal-length columns named like the CSV header.
py::dict trajectory_dict(const Trajectory& tr)
{
    const std::size_t n = tr.records.size();
    Eigen::VectorXd cols[13];
    for (auto& c : cols) c.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const BlochRecord& r = tr.records[k];
        const double row[13] = {tr.times[k], r.p00, r.p10, r.p01, r.s, r.u, r.v,
                                r.w, r.negativity, r.p_even, r.p_odd, r.trace_dev, r.min_eig};
        for (int c = 0; c < 13; ++c) cols[c](static_cast<Eigen::Index>(k)) = row[c];
    }
    static const char* names[13] = {"t", "p00", "p10", "p01", "s", "u", "v",
                                    "w", "negativity", "p_even", "p_odd", "trace_dev", "min_eig"};
    py::dict d;
    for (int c = 0; c < 13; ++c) d[names[c]] = cols[c];
    d["final_state"] = tr.final_state.matrix();
    return d;
}

py::dict manifest_dict(const RunManifest& m)
{
    py::dict d;
    d["status"] = m.status;
    d["wall_time_s"] = m.wall_time_s;
    d["max_trace_dev"] = m.max_trace_dev;
    d["max_herm_dev"] = m.max_herm_dev;
    d["min_eigenvalue"] = m.min_eigenvalue;
    d["p_even_drift"] = m.p_even_drift;
    d["upsilon_plus"] = m.upsilon_plus;
    d["upsilon_minus"] = m.upsilon_minus;
    d["p_odd_initial"] = m.p_odd_initial;
    d["truncation_deficit"] = m.truncation_deficit;
    return d;
}

py::object optional_time(const std::optional<double>& t)
{
    return t ? py::cast(*t) : py::none();
}

} // namespace

PYBIND11_MODULE(_nldiss, m)
{
    m.doc() = "Two coupled nonlinear oscillators under correlated dissipation";
    m.attr("__version__") = NLDISS_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);
    py::register_exception<OutputError>(m, "OutputError", PyExc_OSError);

    // States
    m.def(
        "coherent_state",
        [](Complex alpha, int cutoff) {
            const StateVector psi = coherent_state(alpha, cutoff);
            return py::make_tuple(ComplexVector(psi.amplitudes), psi.truncation_deficit);
        },
        py::arg("alpha"), py::arg("cutoff"), "Normalized amplitudes and the truncation deficit.");
    m.def(
        "product_density",
        [](Complex alpha1, Complex alpha2, int cutoff) {
            return ComplexMatrix(product_density(coherent_state(alpha1, cutoff), coherent_state(alpha2, cutoff)).matrix());
        },
        py::arg("alpha1"), py::arg("alpha2"), py::arg("cutoff"));
    m.def("ladder_lower", py::overload_cast<int>(&ladder_lower), py::arg("cutoff"));

    // Entanglement
    m.def(
        "partial_transpose",
        [](const ComplexMatrix& rho, int cutoff, int subsystem) {
            return partial_transpose(rho, TruncatedSpace(cutoff), subsystem);
        },
        py::arg("rho"), py::arg("cutoff"), py::arg("subsystem") = 1);
    m.def(
        "negativity", [](const ComplexMatrix& rho, int cutoff) { return negativity(as_density(rho, cutoff)); },
        py::arg("rho"), py::arg("cutoff"));
    m.def(
        "parity",
        [](const ComplexMatrix& rho, int cutoff) {
            const ParityPopulations p = parity_populations(as_density(rho, cutoff));
            return py::make_tuple(p.even, p.odd);
        },
        py::arg("rho"), py::arg("cutoff"), "(p_even, p_odd)");
    m.def(
        "bloch_extract",
        [](const ComplexMatrix& rho, int cutoff) { return record_dict(bloch_extract(as_density(rho, cutoff))); },
        py::arg("rho"), py::arg("cutoff"));
    m.def(
        "manifold_state",
        [](int cutoff, double p00, double s, double u, double v, double w) {
            return ComplexMatrix(manifold_state(TruncatedSpace(cutoff), p00, s, u, v, w).matrix());
        },
        py::arg("cutoff"), py::arg("p00"), py::arg("s"), py::arg("u"), py::arg("v"), py::arg("w"));
    m.def("asymptotic_negativity", &asymptotic_negativity, py::arg("p_odd"));

    // Bath
    m.def("bose_einstein", &bose_einstein, py::arg("omega"), py::arg("temperature"));
    m.def(
        "rate_gamma",
        [](double gamma0, double omega0, double temperature, double omega) {
            return rate_gamma(BathSpectrum{gamma0, omega0, temperature}, omega);
        },
        py::arg("gamma0"), py::arg("omega0"), py::arg("temperature"), py::arg("omega"));
    m.def(
        "upsilons",
        [](double gamma0, double omega0, double temperature, double lambda) {
            const Upsilons u = upsilons(BathSpectrum{gamma0, omega0, temperature}, lambda);
            return py::make_tuple(u.plus, u.minus);
        },
        py::arg("gamma0"), py::arg("omega0"), py::arg("temperature"), py::arg("lambda_"), "(upsilon_plus, upsilon_minus)");

    // Oracle
    m.def(
        "bloch_solution",
        [](double s0, double u0, double v0, double w0, double p_odd, double lambda, double upsilon, double t) {
            const BlochState x = bloch_solution(BlochInitial{s0, u0, v0, w0, p_odd, lambda, upsilon}, t);
            return py::make_tuple(x.s, x.u, x.v, x.w);
        },
        py::arg("s0"), py::arg("u0"), py::arg("v0"), py::arg("w0"), py::arg("p_odd"), py::arg("lambda_"),
        py::arg("upsilon"), py::arg("t"), "(s, u, v, w)");

    // Configuration and runs
    m.def("config_keys", &config_keys);
    m.def(
        "resolve_config", [](const std::string& text) { return format_config(resolve(parse_config(text))); },
        py::arg("text"), "Resolved configuration as key = value text.");
    m.def(
        "simulate",
        [](const std::string& text) {
            const RunConfig r = resolve(parse_config(text));
            Trajectory tr;
            {
                py::gil_scoped_release release;
                tr = simulate(r);
            }
            return trajectory_dict(tr);
        },
        py::arg("text"), "Evolve a configuration without writing files.");
    m.def(
        "run_scenario",
        [](const std::string& text) {
            const RunConfig cfg = parse_config(text);
            RunResult res;
            {
                py::gil_scoped_release release;
                res = run_scenario(cfg);
            }
            py::dict d = trajectory_dict(res.trajectory);
            d["manifest"] = manifest_dict(res.manifest);
            d["output_path"] = *res.config.output_path;
            return d;
        },
        py::arg("text"), "Run and write trajectory.csv and manifest.txt under output_path.");
    m.def(
        "detect_esd",
        [](const std::vector<double>& times, const std::vector<double>& neg, double threshold) {
            const EsdResult r = detect_esd(times, neg, threshold);
            return py::make_tuple(optional_time(r.esd_time), optional_time(r.rebirth_time));
        },
        py::arg("times"), py::arg("negativity"), py::arg("threshold") = kEsdThreshold, "(esd_time, rebirth_time)");
    m.def(
        "sweep_temperature",
        [](const std::string& text, const std::vector<double>& temperatures) {
            const RunConfig cfg = parse_config(text);
            std::vector<SweepEntry> entries;
            {
                py::gil_scoped_release release;
                entries = sweep_temperature(cfg, temperatures);
            }
            py::list out;
            for (const SweepEntry& e : entries) {
                py::dict d;
                d["temperature"] = e.temperature;
                d["esd_time"] = optional_time(e.esd.esd_time);
                d["rebirth_time"] = optional_time(e.esd.rebirth_time);
                d["negativity_final"] = e.negativity_final;
                d["directory"] = e.directory.string();
                out.append(d);
            }
            return out;
        },
        py::arg("text"), py::arg("temperatures"));
}
