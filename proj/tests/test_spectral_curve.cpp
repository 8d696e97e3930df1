#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ising2mm/checks.hpp"
#include "ising2mm/errors.hpp"
#include "ising2mm/spectral_curve.hpp"

using namespace ising2mm;

namespace {

constexpr double kPi = std::numbers::pi;

const CurveData& generic() {
    static const CurveData cd = curve_from_abc({1.1, 0.9, 0.7});
    return cd;
}

// Richardson-extrapolated central difference along the real direction in u
cplx dOmega(const CurveData& cd, cplx u) {
    auto d = [&](double h) { return (omega_eval(cd, u + h) - omega_eval(cd, u - h)) / (2 * h); };
    return (4.0 * d(1e-4) - d(2e-4)) / 3.0;
}

double rel_omega_residual(const CurveData& cd, cplx u) {
    const cplx ref = cd.phase.tau * Y_of_u(cd, u) * dX_du(cd, u);
    return std::abs(dOmega(cd, u) - ref) / std::abs(ref);
}

}  // namespace

TEST_CASE("branch points") {
    const CurveData m = curve_from_abc({1, 1, 1});
    CHECK(m.alpha == doctest::Approx(m.beta).epsilon(1e-15));
    const CurveData f = curve_from_abc({1.0184, 0.9100, 0.9100});
    CHECK(f.alpha > 0);
    CHECK(f.alpha < f.beta);
    const CurveData& cd = generic();
    CHECK(cd.alpha == doctest::Approx(X_of_u(cd, 1.1).real()).epsilon(1e-15));
    CHECK(cd.beta == doctest::Approx(X_of_u(cd, 0.9).real()).epsilon(1e-15));
    CHECK(cd.B == doctest::Approx(scale_A(1.1, 0.7, 0.9)).epsilon(1e-15));
    CHECK_THROWS_AS(curve_from_abc({0.9, 0.9, 0.5}), DomainError);
}

TEST_CASE("beta - alpha closes as (a, b) -> (1, 1)") {
    double prev = 1e9;
    for (double e : {0.1, 0.01, 0.001}) {
        const CurveData cd = curve_from_abc({1 + e / 2, 1 - e, 1 - e});
        const double gap = cd.beta - cd.alpha;
        CHECK(gap >= 0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("X and Y are odd") {
    const CurveData& cd = generic();
    for (cplx u : {cplx(0.3, 0.2), cplx(1.7, -0.4), cplx(-0.2, 2.0)}) {
        CHECK(std::abs(X_of_u(cd, -u) + X_of_u(cd, u)) < 1e-13 * std::abs(X_of_u(cd, u)));
        CHECK(std::abs(Y_of_u(cd, -u) + Y_of_u(cd, u)) < 1e-13 * std::abs(Y_of_u(cd, u)));
    }
}

TEST_CASE("stationarity residual decays at least like u^-2") {
    const CurveData& cd = generic();
    const double tau = cd.phase.tau, t = cd.phase.t, q = cd.phase.q();
    auto res = [&](double u) {
        const cplx X = X_of_u(cd, u), Y = Y_of_u(cd, u);
        return std::abs(X + t * q * X * X * X - 1.0 / X - tau * Y);
    };
    // beyond u ~ 50 the residual drops below the roundoff of the O(u^3) terms
    CHECK(std::log2(res(8) / res(16)) >= 2);
    CHECK(std::log2(res(16) / res(32)) >= 2);
}

TEST_CASE("sheet inversion") {
    const CurveData& cd = generic();
    const double A = cd.A, e = 1.1 * 1.1 + 0.9 * 0.9;
    const double z = 1e3 * A;
    const cplx u1 = invert_sheet(cd, z, 1);
    CHECK(std::abs(u1 - (z / A - e * A / z)) < 1e-6);

    for (cplx zz : {cplx(0.7, 0.3), cplx(-2.0, 0.5), cplx(5.0, -1.0)}) {
        CHECK(std::abs(invert_sheet(cd, -zz, 1) + invert_sheet(cd, zz, 1)) < 1e-10);
        CHECK(std::abs(invert_sheet(cd, -zz, 3) + invert_sheet(cd, zz, 4)) < 1e-10);
    }

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int sheet = 1; sheet <= 4; ++sheet) {
        for (int i = 0; i < 100; ++i) {
            const cplx zz(u(rng), u(rng));
            const cplx uu = invert_sheet(cd, zz, sheet);
            CHECK(std::abs(X_of_u(cd, uu) - zz) < 1e-10 * std::max(1.0, std::abs(zz)));
            CHECK(sheet_of_u(cd, uu) == sheet);
        }
    }
}

TEST_CASE("cut preimages are real under X") {
    const CurveData& cd = generic();
    for (int k = 1; k < 40; ++k) {
        const double th = kPi * k / 40;
        const cplx up = std::polar(r_plus(th, 1.1, 0.9), th);
        CHECK(std::abs(X_of_u(cd, up).imag()) < 1e-10);
        if (std::sin(th) * std::sin(th) <= 0.75) {
            const cplx um = std::polar(r_minus(th, 1.1, 0.9), th);
            CHECK(std::abs(X_of_u(cd, um).imag()) < 1e-10);
        }
    }
    // on the real axis outside r_plus, Y is real
    for (double x : {1.2, 2.0, 5.0}) CHECK(Y_of_u(cd, x).imag() == 0);
}

TEST_CASE("Omega is an antiderivative of tau Y X'") {
    const CurveData& cd = generic();
    CHECK(rel_omega_residual(cd, cplx(1.3, 0.4)) < 1e-8);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> r(0.4, 2.5), th(-kPi, kPi);
    for (int i = 0; i < 50; ++i) CHECK(rel_omega_residual(cd, std::polar(r(rng), th(rng))) < 1e-8);
}

TEST_CASE("alternative Omega closed form fails the derivative identity") {
    const CurveData& cd = generic();
    const cplx u(1.3, 0.4);
    auto d = [&](double h) { return (omega_alternative(cd, u + h) - omega_alternative(cd, u - h)) / (2 * h); };
    const cplx ref = cd.phase.tau * Y_of_u(cd, u) * dX_du(cd, u);
    CHECK(std::abs(d(1e-5) - ref) / std::abs(ref) > 1e-6);
}

TEST_CASE("Omega expansion constants") {
    for (ABCPoint p : {ABCPoint{1.1, 0.9, 0.7}, ABCPoint{1.3, 0.6, 0.2}}) {
        const CurveData cd = curve_from_abc(p);
        const OmegaConstants oc = omega_constants_closed_form(cd);
        const OmegaExpansion ex = omega_expansion(cd);
        CHECK(ex.sheet1_constant == doctest::Approx(-oc.ell0).epsilon(1e-10));
        CHECK(ex.sheet3_constant == doctest::Approx(oc.ell1).epsilon(1e-10));
        CHECK(ex.sheet3_zm23 == doctest::Approx(oc.C1 / 3).epsilon(1e-10));
        CHECK(ex.sheet3_zm43 == doctest::Approx(oc.C2 / 6).epsilon(1e-6));

        const double t = cd.phase.t, q = cd.phase.q();
        // sheet 1, Richardson in z^-2
        auto c1 = [&](double z) {
            const cplx om = omega_eval(cd, invert_sheet(cd, z, 1));
            return om.real() - (t * q / 4 * std::pow(z, 4) + z * z / 2 - std::log(z));
        };
        CHECK(std::abs((4 * c1(100) - c1(50)) / 3 - ex.sheet1_constant) < 1e-6);

        // sheet 3, all five orders plus the log z / 3 term
        auto pred3 = [&](double z, bool with_last) {
            const double w = std::cbrt(1 / z);
            return ex.sheet3_z43 / std::pow(w, 4) + ex.sheet3_z23 / (w * w) + std::log(z) / 3 + ex.sheet3_constant +
                   ex.sheet3_zm23 * w * w + (with_last ? ex.sheet3_zm43 * std::pow(w, 4) : 0.0);
        };
        const double z = 1e3;
        const double om3 = omega_eval(cd, invert_sheet(cd, z, 3)).real();
        CHECK(std::abs(om3 - pred3(z, true)) < 1e-6);
        CHECK(std::abs(om3 - pred3(z, false)) > 1e-5);
    }
}

TEST_CASE("mu is a probability measure with symmetric density") {
    for (ABCPoint p : {ABCPoint{1.1, 0.9, 0.7}, ABCPoint{1.3, 0.6, 0.2}, ABCPoint{1, 1, 1}}) {
        const CurveData cd = curve_from_abc(p);
        CHECK(std::abs(measure_mass(cd) - 1) < 1e-6);
        for (int k = 1; k < 30; ++k) {
            const double th = kPi * k / 30;
            const MeasureSample s = measure_density(cd, Measure::Mu, th);
            const MeasureSample m = measure_density(cd, Measure::Mu, kPi - th);
            CHECK(s.density >= -1e-12);
            CHECK(std::abs(s.s + m.s) < 1e-10);
            CHECK(std::abs(s.density - m.density) < 1e-10);
            const MeasureSample n = measure_density(cd, Measure::Nu, kPi / 3 * k / 30);
            CHECK(n.density >= -1e-12);
            CHECK(n.s >= cd.beta - 1e-10);
        }
    }
    CHECK_THROWS_AS(measure_density(generic(), Measure::Nu, 1.5), DomainError);
}

TEST_CASE("endpoint exponents") {
    auto near = [](double x, double target) { return std::abs(x - target) <= 0.05; };
    const CurveData& cd = generic();
    CHECK(near(endpoint_exponent(cd, Measure::Mu, Endpoint::PlusAlpha), 0.5));
    CHECK(near(endpoint_exponent(cd, Measure::Mu, Endpoint::MinusAlpha), 0.5));
    CHECK(near(endpoint_exponent(cd, Measure::Nu, Endpoint::PlusBeta), 0.5));

    const CurveData lo = curve_from_abc({1 / 0.9, 0.9, 0.7});
    CHECK(near(endpoint_exponent(lo, Measure::Nu, Endpoint::PlusBeta), 1.5));
    CHECK(near(endpoint_exponent(lo, Measure::Mu, Endpoint::PlusAlpha), 0.5));

    const CurveData hi = curve_from_abc({1, 0.9, 0.7});
    CHECK(near(endpoint_exponent(hi, Measure::Mu, Endpoint::PlusAlpha), 1.5));

    const CurveData m = curve_from_abc({1, 1, 1});
    CHECK(near(endpoint_exponent(m, Measure::Mu, Endpoint::PlusAlpha), 4.0 / 3));
    CHECK(near(endpoint_exponent(m, Measure::Nu, Endpoint::PlusBeta), 4.0 / 3));

    // on gamma_b the local analysis gives (u - 1)^2 over (u - 1)^3
    const CurveData g = curve_from_abc({1, 1, 0.6});
    CHECK(near(endpoint_exponent(g, Measure::Mu, Endpoint::PlusAlpha), 2.0 / 3));
    CHECK(near(endpoint_exponent(g, Measure::Nu, Endpoint::PlusBeta), 2.0 / 3));

    const ExponentFit fit = endpoint_exponent_fit(cd, Measure::Mu, Endpoint::PlusAlpha);
    CHECK(fit.points == 40);
    CHECK(fit.window_hi / fit.window_lo == doctest::Approx(1e3).epsilon(1e-9));
}

TEST_CASE("exponent fit refuses a window squeezed by a tiny gap") {
    // beta - alpha of order 1e-9 alpha: neither touching nor resolvable
    const CurveData cd = curve_from_abc({1 + 5e-4, 1 - 1e-3, 1 - 1e-3});
    const double gap = cd.beta - cd.alpha;
    REQUIRE(gap > 1e-12 * cd.alpha);
    REQUIRE(gap < 1e-7 * cd.alpha);
    CHECK_THROWS_AS(endpoint_exponent(cd, Measure::Mu, Endpoint::PlusAlpha), InsufficientWindow);
}

TEST_CASE("sextic identity") {
    auto worst = [](const CurveData& cd, double factor) {
        double w = 0;
        for (double r : {0.7, 1.0, 1.4})
            for (int k = 0; k < 64; ++k) w = std::max(w, sextic_residual(cd, std::polar(r, 2 * kPi * (k + 0.5) / 64), factor));
        return w;
    };
    CHECK(worst(generic(), 1.0) < 1e-8);
    CHECK(worst(curve_from_abc({1, 1, 1}), 1.0) < 1e-8);
    CHECK(sextic_residual(generic(), cplx(0.9, 0.4), 1 + 1e-4) > 1e-6);

    CheckOptions opt;
    opt.samples = 20;
    CHECK(check_sextic(opt).pass);

    const SexticCoefficients sc = sextic_coefficients(generic());
    for (double v : {sc.s0, sc.s1, sc.s2q, sc.s2qi}) CHECK(std::isfinite(v));
    CHECK(sc.fixed[0] == doctest::Approx(generic().phase.tau * generic().phase.q()));
}

TEST_CASE("lensing certificates") {
    const LensingCertificate c = check_lensing(ABCPoint{1.059, 0.880, 0.880});
    CHECK(c.pass);
    CHECK(c.q1 > 0);
    CHECK(c.q1_tilde > 0);
    CHECK(check_lensing(ABCPoint{1.0, 0.7, 0.4}).pass);

    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) CHECK(lensing_certificate(sample_interior(rng)).pass);

    CheckOptions opt;
    CHECK(check_lensing(opt).pass);
}
