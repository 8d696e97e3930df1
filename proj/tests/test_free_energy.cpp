#include <doctest.h>

#include <cmath>
#include <random>

#include "ising2mm/checks.hpp"
#include "ising2mm/errors.hpp"
#include "ising2mm/free_energy.hpp"

using namespace ising2mm;

namespace {

double kazakov(int k, double tau, double h) {
    const double x = tau / (4 * (1 - tau * tau) * (1 - tau * tau));
    const double C = std::cosh(h), C2 = std::cosh(2 * h);
    switch (k) {
        case 1: return -4 / tau * C * x;
        case 2: return (8 * tau * tau + 64 + 72 / (tau * tau) * C2) / 2 * x * x;
        case 3: return -3456 / std::pow(tau, 3) * C * (2 * C2 + std::pow(tau, 4) + 2 * tau * tau - 1) / 6 * x * x * x;
    }
    return 0;
}

}  // namespace

TEST_CASE("free energy vanishes at t = 0") {
    CHECK(std::abs(F_eval({0.3, -1e-8, 0.2}).value) < 1e-6);
    CHECK(F_one_matrix(0) == 0);
}

TEST_CASE("first order in t matches the closed form") {
    for (double tau : {0.2, 0.6}) {
        for (double h : {0.0, 0.5}) {
            const double t = -1e-5;
            const double slope = F_eval({tau, t, h}).value / t;
            CHECK(slope == doctest::Approx(kazakov(1, tau, h) + kazakov(2, tau, h) * t).epsilon(1e-6));
        }
    }
}

TEST_CASE("u-integral and lambda-integral agree") {
    const PhasePoint p = map_abc({1.05, 0.9, 0.7});
    const FreeEnergyResult a = F_eval(p), b = F_lambda_form(p);
    CHECK(a.method == "u_integral");
    CHECK(b.method == "lambda_integral");
    CHECK(std::abs(a.value - b.value) < 1e-9 * std::abs(a.value));
    CHECK(a.quad_error_estimate < 1e-9);

    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
        const PhasePoint pp = map_abc(sample_interior(rng));
        const double u = F_eval(pp).value, l = F_lambda_form(pp).value;
        CHECK(std::abs(u - l) <= 1e-9 * std::max(1.0, std::abs(u)));
    }
}

TEST_CASE("planar string equations") {
    const PhasePoint p0{0.4, 0.0, 0.3};
    for (double f : {0.1, 0.3}) {
        CHECK(lambda_tilde(f, p0) == doctest::Approx(f * (1 - 0.16) / 0.4).epsilon(1e-14));
        const PlanarCoefficients pc = planar_relations(f, p0);
        CHECK(pc.R == doctest::Approx(f / 0.4).epsilon(1e-14));
        CHECK(pc.S == 0);
    }

    const PhasePoint pp{0.4, -0.03, 0.3};
    for (double f : {0.05, 0.2, 0.3}) {
        const PlanarCoefficients pc = planar_relations(f, pp);
        CHECK(std::abs(pc.lambda_C - pc.lambda_D) < 1e-13);
        CHECK(pp.tau * pc.S == doctest::Approx(pp.t * std::exp(-pp.h) * f * f * f).epsilon(1e-12));
    }

    const FBranch br = f_branch(pp);
    const double f1 = f_at(br, 1.0, pp);
    const double sigma = solve_sigma(pp).sigma;
    CHECK(f1 == doctest::Approx(-pp.tau * sigma / (3 * pp.t)).epsilon(1e-10));
    CHECK(lambda_tilde(f1, pp) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lambda_tilde derivative") {
    const PhasePoint pp{0.35, -0.03, -0.2};
    for (double f : {0.05, 0.15, 0.25}) {
        const double h = 1e-5;
        const double fd = (lambda_tilde(f + h, pp) - lambda_tilde(f - h, pp)) / (2 * h);
        CHECK(lambda_tilde_df(f, pp) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("one-matrix free energy") {
    CHECK(F_one_matrix(-0.02) > 0);
    CHECK_THROWS_AS(F_one_matrix(-1.0), DomainError);
    // the tau -> 0 limit of the two-matrix coefficients: F = -t/2 + 9t^2/8 + ...
    const double t = -1e-4;
    CHECK((F_one_matrix(t) + t / 2) / (t * t) == doctest::Approx(9.0 / 8).epsilon(1e-3));
}

TEST_CASE("decoupled limit at small tau") {
    const double tau = 1e-3;
    for (double t : {-0.02, -0.05}) CHECK(std::abs(F_eval({tau, (1 - tau * tau) * t, 0}).value - 2 * F_one_matrix(t)) < 1e-5);
}

TEST_CASE("tau -> 1 limit") {
    // holding (1 - tau^2) t fixed runs past t_cr ~ -1.7e-7 at tau = 0.999
    CHECK_THROWS_AS(F_eval({0.999, (1 - 0.999 * 0.999) * -0.02, 0}), BranchPointReached);

    // with t scaled by (1 - tau^2)^2 / (2 tau) the one-matrix model is approached at rate 1 - tau
    const double t = -0.05;
    double prev = 1;
    for (double tau : {0.99, 0.999, 0.9999}) {
        const double tt = (1 - tau * tau) * (1 - tau * tau) * t / (2 * tau);
        const double d = std::abs(F_eval({tau, tt, 0}).value - F_one_matrix(t));
        CHECK(d < 0.05 * (1 - tau));
        CHECK(d < prev / 5);
        prev = d;
    }
}

TEST_CASE("series coefficients match the known low orders") {
    for (auto [tau, h] : {std::pair{0.3, 0.0}, {0.5, 0.4}, {0.15, -0.2}}) {
        const auto s = F_series(tau, h, 3);
        CHECK(std::abs(s[0]) < 1e-14);
        for (int k = 1; k <= 3; ++k) CHECK(s[k] == doctest::Approx(kazakov(k, tau, h)).epsilon(1e-9));
    }
}

TEST_CASE("series coefficients in exact arithmetic") {
    const auto e = F_series_t<Rational>(Rational(1, 2), Rational(1), 3);
    CHECK(e[0] == Rational(0));
    CHECK(e[1] == Rational(-16, 9));
    CHECK(e[2] == Rational(236, 27));
    CHECK(e[3] == Rational(-6400, 81));
}

TEST_CASE("series resums to the integral") {
    for (auto [tau, h] : {std::pair{0.3, 0.0}, {0.5, 0.4}}) {
        const auto s = F_series(tau, h, 16);
        const double t = 0.1 * t_critical(tau, h);
        CHECK(s.eval(t) == doctest::Approx(F_eval({tau, t, h}).value).epsilon(1e-9));
    }
}

TEST_CASE("extended precision series agrees with double") {
    const auto d = F_series(0.3, 0.2, 12);
    const auto e = F_series_hp(0.3, 0.2, 12);
    for (int k = 1; k <= 12; ++k) CHECK(static_cast<double>(e[k]) == doctest::Approx(d[k]).epsilon(1e-9));
}

TEST_CASE("t-derivative against central differences") {
    for (const PhasePoint& p : {PhasePoint{0.4, -0.03, 0.3}, PhasePoint{0.15, -0.05, 0.0}, map_abc({1.05, 0.9, 0.7})}) {
        const double h = 1e-6;
        const double fd = (F_eval({p.tau, p.t + h, p.h}).value - F_eval({p.tau, p.t - h, p.h}).value) / (2 * h);
        CHECK(F_dt(p) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("free energy is even in the field") {
    for (double h : {0.2, 0.9}) CHECK(F_eval({0.3, -0.01, h}).value == doctest::Approx(F_eval({0.3, -0.01, -h}).value).epsilon(1e-12));
}

TEST_CASE("outside the analytic region") {
    CHECK_THROWS_AS(F_eval({0.3, 0.01, 0}), DomainError);
    CHECK_THROWS_AS(F_eval({0.3, 2 * t_critical(0.3, 0), 0}), BranchPointReached);
}
