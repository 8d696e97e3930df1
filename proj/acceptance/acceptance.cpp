// One line per criterion: "criterion N: PASS|FAIL  <seconds>s  <detail>".
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ising2mm/asymptotics.hpp"
#include "ising2mm/checks.hpp"
#include "ising2mm/enumeration.hpp"
#include "ising2mm/free_energy.hpp"
#include "ising2mm/phase_space.hpp"
#include "ising2mm/spectral_curve.hpp"

using namespace ising2mm;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome multicritical() {
    Outcome o;
    const PhasePoint p = map_abc({1, 1, 1});
    const double err = std::max({std::abs(p.tau - 0.25), std::abs(p.t + 5.0 / 72), std::abs(p.q() - 1)});
    o.require(err < 1e-14, "map_abc(1,1,1) off by " + fmt("%.2e", err));
    // sigma - 1 scales like (t + 5/72)^{1/3} on the approach
    double s = 0, prev_gap = 1;
    for (double d : {1e-9, 1e-12, 1e-15}) {
        s = solve_sigma({0.25, -5.0 / 72 + d, 0}).sigma;
        o.require(std::abs(s - 1) < prev_gap, "approach is not monotone at offset " + fmt("%.0e", d));
        prev_gap = std::abs(s - 1);
    }
    o.require(prev_gap < 1e-4, "sigma near the multicritical point " + fmt("%.8f", s));
    if (o.pass) o.detail = "sigma = " + fmt("%.6f", s);
    return o;
}

Outcome roundtrip() {
    Outcome o;
    CheckOptions opt;
    opt.samples = 200;
    const SuiteReport r = check_roundtrip(opt);
    o.require(r.pass, std::to_string(r.failures.size()) + " failures");
    o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(r.checked) + " checks, worst " + fmt("%.2e", r.worst);
    return o;
}

Outcome dual_formula() {
    Outcome o;
    double worst = 0;
    int n = 0;
    for (int i = 0; i < 5; ++i) {
        const double tau = 0.1 + 0.2 * i;
        for (double h : {0.0, 0.3, -0.6}) {
            const double tcr = t_critical(tau, h);
            for (int j = 0; j < 5; ++j) {
                const PhasePoint pp{tau, tcr * (0.1 + 0.2 * j), h};
                const double d = std::abs(F_eval(pp).value - F_lambda_form(pp).value);
                worst = std::max(worst, d);
                ++n;
            }
        }
    }
    o.require(worst < 1e-9, "max difference " + fmt("%.2e", worst));
    if (o.pass) o.detail = std::to_string(n) + " points, max difference " + fmt("%.2e", worst);
    return o;
}

Outcome kazakov_series() {
    Outcome o;
    double worst = 0;
    for (auto [tau, h] : {std::pair{0.3, 0.0}, {0.5, 0.4}, {0.15, -0.2}}) {
        const auto s = F_series(tau, h, 3);
        const double x = tau / (4 * (1 - tau * tau) * (1 - tau * tau));
        const double C = std::cosh(h), C2 = std::cosh(2 * h);
        const double k[4] = {0, -4 / tau * C * x, (8 * tau * tau + 64 + 72 / (tau * tau) * C2) / 2 * x * x,
                             -3456 / std::pow(tau, 3) * C * (2 * C2 + std::pow(tau, 4) + 2 * tau * tau - 1) / 6 * x * x * x};
        for (int v = 1; v <= 3; ++v) worst = std::max(worst, std::abs(s[v] / k[v] - 1));
    }
    o.require(worst < 1e-9, "relative error " + fmt("%.2e", worst));
    if (o.pass) o.detail = "max relative error " + fmt("%.2e", worst);
    return o;
}

Outcome wick_exact() {
    Outcome o;
    const auto w = wick_free_energy_series_exact(Rational(1, 2), Rational(1), 3);
    const auto f = F_series_t<Rational>(Rational(1, 2), Rational(1), 3);
    for (int v = 1; v <= 3; ++v) o.require(w.genus0[v] == f[v], "order " + std::to_string(v) + " differs");
    const auto wd = wick_free_energy_series(0.5, 0.0, 3);
    const auto fd = F_series(0.5, 0.0, 3);
    for (int v = 1; v <= 3; ++v) o.require(std::abs(wd.genus0[v] / fd[v] - 1) < 1e-9, "float order " + std::to_string(v));
    if (o.pass) o.detail = "V <= 3 exact: -16/9, 236/27, -6400/81";
    return o;
}

Outcome decoupling() {
    Outcome o;
    const double tau0 = 1e-3;
    for (double t : {-0.02, -0.05}) {
        const double d = std::abs(F_eval({tau0, (1 - tau0 * tau0) * t, 0}).value - 2 * F_one_matrix(t));
        o.require(d < 1e-5, "low-temperature limit at t = " + fmt("%g", t) + " off by " + fmt("%.2e", d));
    }
    const double tau1 = 0.999;
    for (double t : {-0.02, -0.05}) {
        try {
            const double d = std::abs(F_eval({tau1, (1 - tau1 * tau1) * t, 0}).value - 2 * F_one_matrix(2 * t));
            o.require(d < 1e-4, "tau = 0.999 at t = " + fmt("%g", t) + " off by " + fmt("%.2e", d));
        } catch (const std::exception& e) {
            o.require(false, "tau = 0.999 at t = " + fmt("%g", t) + ": " + e.what() + " (t_cr = " +
                                 fmt("%.3e", t_critical(tau1, 0)) + ")");
        }
    }
    return o;
}

Outcome curve_identities() {
    Outcome o;
    CheckOptions opt;
    opt.samples = 20;
    const SuiteReport s = check_sextic(opt);
    opt.samples = 100;
    const SuiteReport d = check_discriminant(opt);
    o.require(s.pass, "sextic worst " + fmt("%.2e", s.worst));
    o.require(d.pass, "discriminant worst " + fmt("%.2e", d.worst));
    if (o.pass) o.detail = "sextic worst " + fmt("%.2e", s.worst) + ", discriminant worst " + fmt("%.2e", d.worst);
    return o;
}

Outcome lensing() {
    Outcome o;
    CheckOptions opt;
    opt.grid = 10;
    const SuiteReport r = check_lensing(opt);
    o.require(r.pass, std::to_string(r.failures.size()) + " failures");
    const LensingCertificate c = lensing_certificate({1.059, 0.880, 0.880});
    o.require(c.pass && c.q1 > 0 && c.q1_tilde > 0, "sample point");
    if (o.pass) o.detail = std::to_string(r.checked) + " points, sample q1 = " + fmt("%.4f", c.q1);
    return o;
}

Outcome measures() {
    Outcome o;
    double worst_mass = 0;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 5; ++i) worst_mass = std::max(worst_mass, std::abs(measure_mass(curve_from_abc(sample_interior(rng))) - 1));
    o.require(worst_mass < 1e-6, "mass off by " + fmt("%.2e", worst_mass));

    struct Case {
        ABCPoint p;
        Measure m;
        Endpoint e;
        double expect;
        const char* name;
    };
    const Case cases[] = {
        {{1.1, 0.9, 0.7}, Measure::Mu, Endpoint::PlusAlpha, 0.5, "generic mu"},
        {{1.1, 0.9, 0.7}, Measure::Nu, Endpoint::PlusBeta, 0.5, "generic nu"},
        {{1 / 0.9, 0.9, 0.7}, Measure::Nu, Endpoint::PlusBeta, 1.5, "nu on S_low"},
        {{1, 0.9, 0.7}, Measure::Mu, Endpoint::PlusAlpha, 1.5, "mu on S_high"},
        {{1, 1, 1}, Measure::Mu, Endpoint::PlusAlpha, 4.0 / 3, "mu at (1,1,1)"},
    };
    std::string fits;
    for (const Case& c : cases) {
        const double e = endpoint_exponent(curve_from_abc(c.p), c.m, c.e);
        o.require(std::abs(e - c.expect) <= 0.05, std::string(c.name) + " exponent " + fmt("%.4f", e));
        fits += (fits.empty() ? "" : " ") + fmt("%.3f", e);
    }
    if (o.pass) o.detail = "mass err " + fmt("%.1e", worst_mass) + ", exponents " + fits;
    return o;
}

Outcome asymptotics() {
    Outcome o;
    std::string ratios;
    for (double tau : {0.1, 0.5}) {
        const AsymptoticEstimate e = sigma_coeff_asymptotic(tau, 40);
        o.require(std::abs(e.ratio - 1) < 0.02, "tau = " + fmt("%g", tau) + " ratio " + fmt("%.4f", e.ratio));
        ratios += "tau=" + fmt("%g", tau) + ":" + fmt("%.4f", e.ratio) + " ";
    }
    const AsymptoticEstimate a = sigma_coeff_airy(0.22, 60);
    o.require(std::abs(a.ratio - 1) < 0.05, "Airy ratio " + fmt("%.4f", a.ratio));
    if (o.pass) o.detail = ratios + "airy:" + fmt("%.4f", a.ratio);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria = {multicritical, roundtrip, dual_formula, kazakov_series, wick_exact,
                                                           decoupling,    curve_identities, lensing, measures, asymptotics};
    const double budget[] = {1, 10, 30, 5, 60, 5, 20, 30, 60, 30};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("unexpected exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(secs < budget[i], "over the " + fmt("%g", budget[i]) + " s budget");
        std::printf("criterion %zu: %s  %.2fs  %s\n", i + 1, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed;
}
