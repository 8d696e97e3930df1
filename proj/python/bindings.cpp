#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ising2mm/asymptotics.hpp"
#include "ising2mm/checks.hpp"
#include "ising2mm/cli.hpp"
#include "ising2mm/enumeration.hpp"
#include "ising2mm/errors.hpp"
#include "ising2mm/free_energy.hpp"
#include "ising2mm/phase_space.hpp"
#include "ising2mm/spectral_curve.hpp"

namespace py = pybind11;
using namespace ising2mm;

namespace {

std::vector<double> coefficients(const TruncatedSeries<double>& s) {
    std::vector<double> out(s.order() + 1);
    for (std::size_t k = 0; k <= s.order(); ++k) out[k] = s[k];
    return out;
}

Measure measure_from(const std::string& name) {
    if (name == "mu") return Measure::Mu;
    if (name == "nu") return Measure::Nu;
    throw DomainError("measure must be 'mu' or 'nu'");
}

Endpoint endpoint_from(const std::string& name) {
    if (name == "+alpha") return Endpoint::PlusAlpha;
    if (name == "-alpha") return Endpoint::MinusAlpha;
    if (name == "+beta") return Endpoint::PlusBeta;
    if (name == "-beta") return Endpoint::MinusBeta;
    throw DomainError("endpoint must be one of +alpha, -alpha, +beta, -beta");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Genus-zero quartic two-matrix Ising model";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<BranchPointReached>(m, "BranchPointReached", PyExc_ArithmeticError);
    py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_ValueError);

    py::class_<ABCPoint>(m, "ABCPoint")
        .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"))
        .def_readwrite("a", &ABCPoint::a)
        .def_readwrite("b", &ABCPoint::b)
        .def_readwrite("c", &ABCPoint::c)
        .def("__repr__", [](const ABCPoint& p) {
            std::ostringstream s;
            s << "ABCPoint(a=" << p.a << ", b=" << p.b << ", c=" << p.c << ")";
            return s.str();
        });

    py::class_<PhasePoint>(m, "PhasePoint")
        .def(py::init([](double tau, double t, double H) { return PhasePoint{tau, t, H}; }), py::arg("tau"), py::arg("t"),
             py::arg("H") = 0.0)
        .def_readwrite("tau", &PhasePoint::tau)
        .def_readwrite("t", &PhasePoint::t)
        .def_readwrite("H", &PhasePoint::h)
        .def_property_readonly("q", &PhasePoint::q)
        .def("__repr__", [](const PhasePoint& p) {
            std::ostringstream s;
            s.precision(17);
            s << "PhasePoint(tau=" << p.tau << ", t=" << p.t << ", H=" << p.h << ")";
            return s.str();
        });

    py::enum_<Regime>(m, "Regime")
        .value("LowTemp", Regime::LowTemp)
        .value("HighTemp", Regime::HighTemp)
        .value("AiryUniform", Regime::AiryUniform);

    m.def("map_abc", [](double a, double b, double c) { return map_abc({a, b, c}); }, py::arg("a"), py::arg("b"), py::arg("c"));
    m.def("critical_surface_low", &critical_surface_low, py::arg("b"), py::arg("c"));
    m.def("critical_surface_high", &critical_surface_high, py::arg("b"), py::arg("c"));
    m.def("critical_curve_b", &critical_curve_b, py::arg("c"));
    m.def("t_critical", &t_critical, py::arg("tau"), py::arg("H") = 0.0);
    m.def(
        "solve_sigma", [](double tau, double t, double H) { return solve_sigma({tau, t, H}).sigma; }, py::arg("tau"),
        py::arg("t"), py::arg("H") = 0.0);
    m.def(
        "classify", [](double tau, double t, double H) { return to_string(classify({tau, t, H})); }, py::arg("tau"),
        py::arg("t"), py::arg("H") = 0.0);

    m.def(
        "free_energy", [](double tau, double t, double H, double tol) { return F_eval({tau, t, H}, tol).value; },
        py::arg("tau"), py::arg("t"), py::arg("H") = 0.0, py::arg("tol") = 1e-11);
    m.def(
        "free_energy_lambda",
        [](double tau, double t, double H, double tol) { return F_lambda_form({tau, t, H}, tol).value; }, py::arg("tau"),
        py::arg("t"), py::arg("H") = 0.0, py::arg("tol") = 1e-11);
    m.def(
        "free_energy_series",
        [](double tau, double H, std::size_t order) { return coefficients(F_series(tau, H, order)); }, py::arg("tau"),
        py::arg("H") = 0.0, py::arg("order") = 6);

    m.def(
        "curve_branch_points",
        [](double a, double b, double c) {
            const CurveData cd = curve_from_abc({a, b, c});
            return py::dict(py::arg("alpha") = cd.alpha, py::arg("beta") = cd.beta, py::arg("A") = cd.A,
                            py::arg("B") = cd.B, py::arg("sigma") = cd.sigma);
        },
        py::arg("a"), py::arg("b"), py::arg("c"));
    m.def(
        "measure_mass", [](double a, double b, double c) { return measure_mass(curve_from_abc({a, b, c})); }, py::arg("a"),
        py::arg("b"), py::arg("c"));
    m.def(
        "endpoint_exponent",
        [](double a, double b, double c, const std::string& measure, const std::string& endpoint) {
            return endpoint_exponent(curve_from_abc({a, b, c}), measure_from(measure), endpoint_from(endpoint));
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("measure") = "mu", py::arg("endpoint") = "+alpha");

    m.def("sigma_coeff_exact", &sigma_coeff_exact, py::arg("tau"), py::arg("V"));
    m.def(
        "sigma_coeff_asymptotic",
        [](double tau, int V) {
            const AsymptoticEstimate e = std::abs(tau - 0.25) <= 0.05 ? sigma_coeff_airy(tau, V) : sigma_coeff_asymptotic(tau, V);
            return py::dict(py::arg("V") = e.V, py::arg("exact") = e.exact, py::arg("estimate") = e.estimate,
                            py::arg("regime") = e.regime, py::arg("ratio") = e.ratio);
        },
        py::arg("tau"), py::arg("V"));

    m.def(
        "wick_genus0_exact",
        [](const std::string& tau, const std::string& q, int vmax) {
            const auto w = wick_free_energy_series_exact(Rational(tau), Rational(q), vmax);
            std::vector<std::string> out;
            for (int v = 1; v <= vmax; ++v) out.push_back(w.genus0[v].str());
            return out;
        },
        py::arg("tau"), py::arg("q") = "1", py::arg("vmax") = 3);

    m.def(
        "run_check",
        [](const std::string& suite, int samples, std::uint64_t seed) {
            CheckOptions opt;
            opt.samples = samples;
            opt.seed = seed;
            const SuiteReport r = run_suite(suite, opt);
            return py::dict(py::arg("suite") = r.suite, py::arg("pass") = r.pass, py::arg("checked") = r.checked,
                            py::arg("worst") = r.worst, py::arg("failures") = r.failures.size());
        },
        py::arg("suite"), py::arg("samples") = 200, py::arg("seed") = 7);

    // Same entry point as the command-line tool; returns (exit code, stdout, stderr).
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));

    m.attr("SCHEMA") = kSchema;
}
