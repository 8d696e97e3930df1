#include "ising2mm/checks.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ising2mm/enumeration.hpp"
#include "ising2mm/errors.hpp"
#include "ising2mm/free_energy.hpp"
#include "ising2mm/spectral_curve.hpp"

namespace ising2mm {

namespace {

std::string describe(const ABCPoint& p) {
    std::ostringstream os;
    os.precision(17);
    os << "(a,b,c)=(" << p.a << "," << p.b << "," << p.c << ")";
    return os.str();
}

void record(SuiteReport& r, double value, double threshold, const std::string& where) {
    ++r.checked;
    if (std::isfinite(value) && value > r.worst) r.worst = value;
    if (!(value < threshold)) {
        r.pass = false;
        r.failures.push_back({where, value, threshold});
    }
}

void record_error(SuiteReport& r, const std::string& where, const std::exception& e) {
    ++r.checked;
    r.pass = false;
    r.failures.push_back({where + ": " + e.what(), std::nan(""), 0});
}

// fourth-order central differences; the determinant cancels strongly near a = 1
double jacobian_fd(const ABCPoint& p) {
    Eigen::Matrix3d J;
    for (int k = 0; k < 3; ++k) {
        auto at = [&](double off) {
            ABCPoint q = p;
            (k == 0 ? q.a : k == 1 ? q.b : q.c) += off;
            const PhasePoint f = map_abc(q, false);
            return Eigen::Vector3d(f.tau, f.t, f.q());
        };
        const double h = 1e-3 * (k == 0 ? p.a : k == 1 ? p.b : p.c);
        J.col(k) = (8 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h);
    }
    return J.determinant();
}

}  // namespace

ABCPoint sample_interior(std::mt19937_64& rng, double margin) {
    std::uniform_real_distribution<double> u(margin, 1 - margin);
    ABCPoint p;
    p.b = u(rng);
    p.a = 1 + (1 / p.b - 1) * u(rng);
    p.c = p.b * u(rng);
    return p;
}

SuiteReport check_roundtrip(const CheckOptions& opt) {
    SuiteReport r{"roundtrip"};
    std::mt19937_64 rng(opt.seed);
    for (int i = 0; i < opt.samples; ++i) {
        const ABCPoint p = sample_interior(rng);
        try {
            const PhasePoint pp = map_abc(p);
            const double s = solve_sigma(pp).sigma;
            record(r, std::abs(s - p.a * p.a * p.b * p.c), 1e-10, describe(p) + " sigma");
            const double jc = jacobian_abc(p), jf = jacobian_fd(p);
            record(r, std::abs(jc - jf) / std::max(std::abs(jc), 1e-300), 1e-6, describe(p) + " jacobian");
        } catch (const std::exception& e) {
            record_error(r, describe(p), e);
        }
    }
    return r;
}

SuiteReport check_lensing(const CheckOptions& opt) {
    SuiteReport r{"lensing"};
    auto one = [&](const ABCPoint& p) {
        const LensingCertificate c = lensing_certificate(p);
        ++r.checked;
        if (!c.pass || !(c.q1 > 0) || !(c.q1_tilde > 0)) {
            r.pass = false;
            r.failures.push_back({describe(p) + " " + c.witness, c.min_margin, 0});
        }
    };
    one(opt.point);
    const int n = opt.grid;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                ABCPoint p;
                p.b = (i + 0.5) / n;
                p.a = 1 + (1 / p.b - 1) * (j + 0.5) / n;
                p.c = p.b * (k + 0.5) / n;
                one(p);
            }
    return r;
}

SuiteReport check_sextic(const CheckOptions& opt) {
    SuiteReport r{"sextic"};
    std::mt19937_64 rng(opt.seed);
    for (int i = 0; i < opt.samples; ++i) {
        const ABCPoint p = sample_interior(rng);
        try {
            const CurveData cd = curve_from_abc(p);
            double worst = 0;
            for (double rad : {0.7, 1.0, 1.4})
                for (int k = 0; k < 64; ++k) {
                    const double th = 2 * std::numbers::pi * (k + 0.5) / 64;
                    worst = std::max(worst, sextic_residual(cd, std::polar(rad, th)));
                }
            record(r, worst, 1e-8, describe(p));
        } catch (const std::exception& e) {
            record_error(r, describe(p), e);
        }
    }
    return r;
}

SuiteReport check_discriminant(const CheckOptions& opt) {
    SuiteReport r{"discriminant"};
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (int i = 0; i < opt.samples; ++i) {
        PhasePoint pp;
        std::string where;
        const double b = u(rng), c = b * u(rng);
        switch (i % 3) {
            case 0: pp = critical_surface_low(b, c); where = "S_low"; break;
            case 1: pp = critical_surface_high(b, c); where = "S_high"; break;
            default: pp = critical_curve_b(u(rng)); where = "gamma_b"; break;
        }
        std::ostringstream os;
        os.precision(17);
        os << where << " (tau,t,H)=(" << pp.tau << "," << pp.t << "," << pp.h << ")";
        record(r, discriminant_J_scaled(pp.tau, pp.t, std::cosh(pp.h)), 1e-8, os.str());
    }
    return r;
}

SuiteReport check_series(const CheckOptions&) {
    SuiteReport r{"series"};
    constexpr int order = 3;
    for (auto [tau, h] : {std::pair{0.3, 0.0}, {0.5, 0.4}, {0.15, -0.2}}) {
        const auto w = wick_free_energy_series(tau, h, order);
        const auto f = F_series(tau, h, order);
        for (int v = 1; v <= order; ++v) {
            std::ostringstream os;
            os << "tau=" << tau << " H=" << h << " order " << v;
            record(r, std::abs(w.genus0[v] - f[v]) / std::max(std::abs(f[v]), 1e-300), 1e-9, os.str());
        }
    }
    const auto we = wick_free_energy_series_exact(Rational(1, 2), Rational(1), order);
    const auto fe = F_series_t<Rational>(Rational(1, 2), Rational(1), order);
    for (int v = 1; v <= order; ++v) {
        ++r.checked;
        if (we.genus0[v] != fe[v]) {
            r.pass = false;
            r.failures.push_back({"exact tau=1/2 q=1 order " + std::to_string(v) + ": " + we.genus0[v].str() +
                                      " vs " + fe[v].str(),
                                  1, 0});
        }
    }
    return r;
}

std::vector<std::string> suite_names() { return {"lensing", "sextic", "discriminant", "roundtrip", "series"}; }

SuiteReport run_suite(const std::string& name, const CheckOptions& opt) {
    if (name == "lensing") return check_lensing(opt);
    if (name == "sextic") return check_sextic(opt);
    if (name == "discriminant") return check_discriminant(opt);
    if (name == "roundtrip") return check_roundtrip(opt);
    if (name == "series") return check_series(opt);
    throw DomainError("unknown suite " + name);
}

}  // namespace ising2mm
