#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "ising2mm/checks.hpp"
#include "ising2mm/errors.hpp"
#include "ising2mm/phase_space.hpp"

using namespace ising2mm;

namespace {

// fourth-order central differences of map_abc, independent of the closed-form determinant
double fd_jacobian(const ABCPoint& p) {
    Eigen::Matrix3d J;
    const double x[3] = {p.a, p.b, p.c};
    for (int k = 0; k < 3; ++k) {
        auto at = [&](double off) {
            ABCPoint q = p;
            (k == 0 ? q.a : k == 1 ? q.b : q.c) += off;
            const PhasePoint f = map_abc(q, false);
            return Eigen::Vector3d(f.tau, f.t, f.q());
        };
        const double h = 1e-3 * x[k];
        J.col(k) = (8 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h);
    }
    return J.determinant();
}

double fd(auto f, double x, double h) { return (8 * (f(x + h) - f(x - h)) - (f(x + 2 * h) - f(x - 2 * h))) / (12 * h); }

}  // namespace

TEST_CASE("map_abc at the multicritical point") {
    const PhasePoint pp = map_abc({1, 1, 1});
    CHECK(std::abs(pp.tau - 0.25) < 1e-14);
    CHECK(std::abs(pp.t + 5.0 / 72) < 1e-14);
    CHECK(std::abs(pp.q() - 1) < 1e-14);
}

TEST_CASE("map_abc with b = c gives q = 1") {
    for (auto [a, b] : {std::pair{1.0, 0.5}, {1.7, 0.55}, {1.05, 0.9}}) CHECK(std::abs(map_abc({a, b, b}).h) < 1e-15);
}

TEST_CASE("map_abc generic point matches 40-digit evaluation") {
    const PhasePoint pp = map_abc({1.2, 0.8, 0.5});
    CHECK(pp.tau == doctest::Approx(0.33574547411256287932).epsilon(1e-14));
    CHECK(pp.t == doctest::Approx(-0.056830553205039417918).epsilon(1e-14));
    CHECK(pp.q() == doctest::Approx(0.93219616204690831112).epsilon(1e-14));
}

TEST_CASE("map_abc rejects points outside R unless relaxed") {
    CHECK_THROWS_AS(map_abc({0.9, 0.5, 0.3}), DomainError);
    CHECK_THROWS_AS(map_abc({1.2, 0.5, 0.6}), DomainError);
    CHECK_NOTHROW(map_abc({0.9, 0.5, 0.3}, false));
}

TEST_CASE("jacobian vanishes on a = 1 and a = 1/b") {
    for (auto [b, c] : {std::pair{0.5, 0.3}, {0.8, 0.8}, {0.95, 0.1}}) {
        CHECK(std::abs(jacobian_abc({1, b, c})) < 1e-12);
        CHECK(std::abs(jacobian_abc({1 / b, b, c})) < 1e-12);
    }
}

TEST_CASE("jacobian matches finite differences") {
    const ABCPoint p{1.1, 0.85, 0.6};
    const double jc = jacobian_abc(p);
    CHECK(std::abs(jc - fd_jacobian(p)) < 1e-6 * std::abs(jc));

    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const ABCPoint q = sample_interior(rng);
        const double j = jacobian_abc(q);
        CHECK(std::abs(j - fd_jacobian(q)) < 1e-6 * std::abs(j));
    }
}

TEST_CASE("sigma equation basics") {
    for (double tau : {0.1, 0.5, 0.9}) {
        const PhasePoint p0{tau, 0.0, 0.3};
        CHECK(I_eval(0, p0) == 0);
        CHECK(I_dsigma(0, p0) == doctest::Approx((tau * tau - 1) / 3).epsilon(1e-15));
    }
    const ABCPoint p{1.1, 0.9, 0.7};
    CHECK(std::abs(I_eval(p.a * p.a * p.b * p.c, map_abc(p))) < 1e-12);
}

TEST_CASE("G derivatives match finite differences") {
    for (double C : {1.0, 1.3}) {
        for (double s : {0.2, 0.55, 0.8}) {
            const double tau = 0.37;
            auto g = [&](double x) { return G_eval(x, tau, C); };
            auto gp = [&](double x) { return G_dsigma(x, tau, C); };
            CHECK(G_dsigma(s, tau, C) == doctest::Approx(fd(g, s, 1e-4)).epsilon(1e-8));
            CHECK(G_d2sigma(s, tau, C) == doctest::Approx(fd(gp, s, 1e-4)).epsilon(1e-8));
        }
    }
}

TEST_CASE("pole guard in I_eval") {
    CHECK_THROWS_AS(I_eval(1.0, {0.3, -0.01, 0.4}), PoleError);
    CHECK_THROWS_AS(I_eval(-1.0, {0.3, -0.01, 0.0}), PoleError);
}

TEST_CASE("solve_sigma examples") {
    CHECK(solve_sigma({0.4, 0.0, 0.2}).sigma == 0);
    const ABCPoint p{1.05, 0.9, 0.6};
    CHECK(std::abs(solve_sigma(map_abc(p)).sigma - 1.05 * 1.05 * 0.9 * 0.6) < 1e-10);
    // approaching the multicritical point from inside, sigma -> 1 like |t - t_cr|^{1/4}
    double prev = 0;
    for (double d : {1e-6, 1e-10, 1e-14}) {
        const double s = solve_sigma({0.25, -5.0 / 72 + d, 0}).sigma;
        CHECK(s > prev);
        prev = s;
    }
    CHECK(std::abs(prev - 1) < 1e-3);
}

TEST_CASE("solve_sigma reports the branch point beyond t_cr") {
    CHECK_THROWS_AS(solve_sigma({0.5, -1.0, 0}), BranchPointReached);
    CHECK_THROWS_AS(solve_sigma({0.2, t_critical(0.2, 0.4) * 1.01, 0.4}), BranchPointReached);
}

TEST_CASE("sigma is even in H") {
    for (double h : {0.1, 0.7}) CHECK(solve_sigma({0.3, -0.03, h}).sigma == solve_sigma({0.3, -0.03, -h}).sigma);
    const PhasePoint pp{0.3, -0.03, 0.7};
    CHECK(pp.q() * PhasePoint{0.3, -0.03, -0.7}.q() == doctest::Approx(1).epsilon(1e-15));
}

TEST_CASE("roundtrip over seeded interior samples") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        const ABCPoint p = sample_interior(rng);
        const double s = solve_sigma(map_abc(p)).sigma;
        CHECK(std::abs(s - p.a * p.a * p.b * p.c) < 1e-10);
    }
}

TEST_CASE("lambda function") {
    const PhasePoint pp{0.3, -0.04, 0.2};
    CHECK(lambda_eval(0, pp) == 0);
    CHECK(lambda_du(0, pp) == doctest::Approx((0.09 - 1) / (3 * -0.04)).epsilon(1e-14));
    const double s = solve_sigma(pp).sigma;
    CHECK(std::abs(lambda_eval(s, pp) - 1) < 1e-12);
    auto l = [&](double u) { return lambda_eval(u, pp); };
    CHECK(lambda_du(0.1, pp) == doctest::Approx(fd(l, 0.1, 1e-3)).epsilon(1e-9));
}

TEST_CASE("t_critical closed forms") {
    CHECK(t_low(0.25) == doctest::Approx(-5.0 / 72).epsilon(1e-15));
    CHECK(t_high(0.25) == doctest::Approx(-5.0 / 72).epsilon(1e-15));
    CHECK(t_critical(1e-9, 0) == doctest::Approx(-1.0 / 12).epsilon(1e-12));
    for (int k = 1; k <= 19; ++k) {
        const double tau = 0.05 * k;
        CHECK(std::abs(t_critical(tau, 0) - critical_double_root(tau, 0).t) < 1e-8);
    }
}

TEST_CASE("t_critical depends on the field") {
    for (double tau : {0.1, 0.3, 0.6}) {
        const double t0 = t_critical(tau, 0), t5 = t_critical(tau, 0.5);
        CHECK(std::abs(t5 - t0) > 1e-4);
        // the double root really is one
        const DoubleRoot dr = critical_double_root(tau, 0.5);
        const PhasePoint pp{tau, dr.t, 0.5};
        CHECK(std::abs(I_eval(dr.sigma, pp)) < 1e-12);
        CHECK(std::abs(I_dsigma(dr.sigma, pp)) < 1e-8);
    }
}

TEST_CASE("classify examples") {
    CHECK(classify({0.3, -0.01, 0}) == RegionLabel::GenusZeroInterior);
    CHECK(classify({0.25, -5.0 / 72, 0}) == RegionLabel::Multicritical);
    CHECK(classify({0.5, -1.0, 0}) == RegionLabel::Outside);
    CHECK(classify({0.3, 0.0, 0}) == RegionLabel::BoundaryT0);
    CHECK(classify({0.1, t_low(0.1), 0}) == RegionLabel::LowTempSurface);
    CHECK(classify({0.6, t_high(0.6), 0}) == RegionLabel::HighTempSurface);
    const PhasePoint g = critical_curve_b(0.5);
    CHECK(classify(g) == RegionLabel::GammaB);
    // H and -H classify alike
    CHECK(classify({0.3, -0.02, -0.4}) == classify({0.3, -0.02, 0.4}));
}

TEST_CASE("critical surfaces match the parametrization") {
    const PhasePoint g1 = critical_curve_b(1);
    CHECK(g1.tau == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g1.t == doctest::Approx(-5.0 / 72).epsilon(1e-15));
    CHECK(std::abs(g1.h) < 1e-15);

    const PhasePoint lo = critical_surface_low(0.9, 0.5), lo_ref = map_abc({1 / 0.9, 0.9, 0.5});
    CHECK(std::abs(lo.tau - lo_ref.tau) < 1e-12);
    CHECK(std::abs(lo.t - lo_ref.t) < 1e-12);
    CHECK(std::abs(lo.q() - lo_ref.q()) < 1e-12);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 50; ++i) {
        const double b = u(rng), c = b * u(rng);
        const PhasePoint hi = critical_surface_high(b, c), hi_ref = map_abc({1, b, c});
        CHECK(std::abs(hi.tau - hi_ref.tau) < 1e-12);
        CHECK(std::abs(hi.t - hi_ref.t) < 1e-12);
        CHECK(std::abs(hi.q() - hi_ref.q()) < 1e-12);
        const PhasePoint l = critical_surface_low(b, c), l_ref = map_abc({1 / b, b, c});
        CHECK(std::abs(l.t - l_ref.t) < 1e-12);
        // the surfaces sit on t_cr of their own (tau, H)
        CHECK(std::abs(hi.t - t_critical(hi.tau, hi.h)) < 1e-7);
    }

    const PhasePoint edge = critical_surface_high(1 - 1e-9, 0.4), curve = critical_curve_b(0.4);
    CHECK(std::abs(edge.tau - curve.tau) < 1e-8);
    CHECK(std::abs(edge.t - curve.t) < 1e-8);
    CHECK_THROWS_AS(critical_surface_low(0.5, 0.6), DomainError);
}

TEST_CASE("discriminant vanishes on the critical locus") {
    const PhasePoint p = critical_surface_low(0.8, 0.4);
    CHECK(discriminant_J_scaled(p.tau, p.t, std::cosh(p.h)) < 1e-8);
    CHECK(discriminant_J_scaled(0.25, -5.0 / 72, 1) < 1e-8);
    CHECK(discriminant_J_scaled(0.3, -0.02, 1) > 1e-4);

    CheckOptions opt;
    opt.samples = 100;
    opt.seed = 3;
    const SuiteReport r = check_discriminant(opt);
    CHECK(r.pass);
    CHECK(r.checked == 100);
}

TEST_CASE("discriminant is nonzero on the zero-field interior") {
    // at H = 0 the polynomial factors, and one factor also vanishes on the continuation of the
    // t_low line, so samples keep clear of that line as well as of the critical surface
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    int probed = 0;
    while (probed < 200) {
        const double b = u(rng), a = 1 + (1 / b - 1) * u(rng);
        const PhasePoint pp = map_abc({a, b, b});
        if (std::abs(pp.t - t_low(pp.tau)) < 0.1 * std::abs(pp.t) ||
            std::abs(pp.t - t_critical(pp.tau, 0)) < 0.1 * std::abs(pp.t))
            continue;
        ++probed;
        CHECK(discriminant_J_scaled(pp.tau, pp.t, 1) > 1e-12);
    }
}

TEST_CASE("interior grid invariants") {
    for (int i = 1; i < 8; ++i)
        for (int j = 1; j < 8; ++j)
            for (int k = 1; k < 8; ++k) {
                const double b = i / 8.0, a = 1 + (1 / b - 1) * j / 8.0, c = b * k / 8.0;
                const PhasePoint pp = map_abc({a, b, c});
                const double sigma = a * a * b * c;
                CHECK(pp.tau > 0);
                CHECK(pp.tau < 1);
                CHECK(pp.t < 0);
                CHECK(pp.q() > 0);
                CHECK(pp.q() <= 1);
                CHECK(sigma < 1);
            }
}

TEST_CASE("invert_phase_point recovers (a,b,c)") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 20; ++i) {
        const ABCPoint p = sample_interior(rng);
        const PhasePoint pp = map_abc(p);
        const ABCPoint r = invert_phase_point(pp, p.a * p.a * p.b * p.c);
        // the inverse lands on the H <= 0 representative, i.e. c <= b
        CHECK(std::abs(r.a - p.a) < 1e-8 * p.a);
        CHECK(std::abs(r.b - p.b) < 1e-8);
        CHECK(std::abs(r.c - p.c) < 1e-8);
    }
}
