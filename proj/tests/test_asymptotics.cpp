#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ising2mm/asymptotics.hpp"
#include "ising2mm/errors.hpp"
#include "ising2mm/phase_space.hpp"

using namespace ising2mm;

TEST_CASE("saddle points") {
    for (double tau : {0.1, 0.5, 0.81}) {
        const auto z = saddle_points(tau);
        CHECK(z[0] == std::complex<double>(1, 0));
        const double r = 1 / std::sqrt(tau);
        CHECK(std::abs(z[1] - std::complex<double>(-1 + r, 0)) < 1e-15);
        CHECK(std::abs(z[2] - std::complex<double>(-1 - r, 0)) < 1e-15);
        CHECK(std::abs(z[3] - std::complex<double>(-1, r)) < 1e-15);
        CHECK(std::abs(z[4] - std::complex<double>(-1, -r)) < 1e-15);
        for (int k : {0, 1, 2}) CHECK(std::abs(G_dsigma(z[k].real(), tau, 1)) < 1e-12);
    }
    // the two relevant real saddles meet at tau = 1/4
    CHECK(saddle_points(0.25)[1].real() == doctest::Approx(1.0));
    CHECK(dominant_saddle(0.1) == 1);
    CHECK(dominant_saddle(0.81) == doctest::Approx(1.0 / 9).epsilon(1e-14));
}

TEST_CASE("coefficient signs alternate with t_cr") {
    for (double tau : {0.1, 0.3, 0.7}) {
        const auto c = sigma_coeff_exact_all(tau, 30);
        const double tc = t_critical(tau, 0);
        for (int V = 1; V <= 30; ++V) CHECK(c[V] * std::pow(tc, V) > 0);
        CHECK(sigma_coeff_exact(tau, 12) == doctest::Approx(c[12]).epsilon(1e-14));
    }
}

TEST_CASE("leading estimate in the high-temperature phase") {
    const AsymptoticEstimate e = sigma_coeff_asymptotic(0.5, 40);
    CHECK(e.regime == Regime::HighTemp);
    CHECK(std::abs(e.ratio - 1) < 0.02);
    CHECK(e.ratio == doctest::Approx(e.estimate / e.exact));
}

TEST_CASE("leading estimate in the low-temperature phase has an O(1/V) correction") {
    // V (ratio - 1) settles near 3 at tau = 0.1
    for (int V : {20, 40, 80}) {
        const AsymptoticEstimate e = sigma_coeff_asymptotic(0.1, V);
        CHECK(e.regime == Regime::LowTemp);
        const double scaled = (e.ratio - 1) * V;
        CHECK(scaled > 2.3);
        CHECK(scaled < 3.2);
    }
}

TEST_CASE("leading estimate near tau = 1/4") {
    CHECK_THROWS_AS(sigma_coeff_leading(0.24, 40), GuardBand);
    CHECK_THROWS_AS(sigma_coeff_leading(0.265, 40), GuardBand);
    for (double tau : {0.1, 0.2, 0.3, 0.6}) CHECK(sigma_coeff_leading(tau, 30) * std::pow(t_critical(tau, 0), 30) > 0);
}

TEST_CASE("Airy uniform estimate") {
    CHECK(airy_s(0.25) == 0);
    CHECK(airy_s(0.2) > 0);
    CHECK(airy_s(0.3) > 0);

    const AsymptoticEstimate e = sigma_coeff_airy(0.22, 60);
    CHECK(e.regime == Regime::AiryUniform);
    CHECK(std::abs(e.ratio - 1) < 0.05);
    for (double tau : {0.2, 0.24, 0.2499, 0.25, 0.2501, 0.26, 0.3}) CHECK(std::abs(sigma_coeff_airy(tau, 60).ratio - 1) < 0.05);

    // at V = 60 the log of the coefficient moves by about 100 per unit tau
    const double below = sigma_coeff_airy_value(0.25 - 1e-9, 60), above = sigma_coeff_airy_value(0.25 + 1e-9, 60);
    CHECK(below == doctest::Approx(above).epsilon(1e-6));

    CHECK_THROWS_AS(sigma_coeff_airy_value(0.35, 40), DomainError);
    CHECK_THROWS_AS(sigma_coeff_airy_value(0.15, 40), DomainError);
}

TEST_CASE("Airy form approaches the leading form as V grows") {
    for (double tau : {0.2, 0.3}) {
        double prev = 1e9;
        for (int V : {40, 80, 160}) {
            const double gap = std::abs(sigma_coeff_leading(tau, V) / sigma_coeff_airy_value(tau, V) - 1);
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev < 0.25);
    }
}

TEST_CASE("Airy functions") {
    CHECK(airy_ai(0) == doctest::Approx(std::pow(3.0, -2.0 / 3) / std::tgamma(2.0 / 3)).epsilon(1e-14));
    CHECK(airy_ai_prime(0) == doctest::Approx(-std::pow(3.0, -1.0 / 3) / std::tgamma(1.0 / 3)).epsilon(1e-14));
    CHECK(airy_ai(10) < 1e-9);
    CHECK(airy_ai(10) > 0);
    for (double x : {-8.0, -1.5, 0.0, 2.0, 6.0}) {
        const double w = airy_ai(x) * airy_bi_prime(x) - airy_ai_prime(x) * airy_bi(x);
        CHECK(w == doctest::Approx(1 / std::numbers::pi).epsilon(1e-10));
        const double h = 1e-5;
        const double d2 = (airy_ai_prime(x + h) - airy_ai_prime(x - h)) / (2 * h);
        CHECK(std::abs(d2 - x * airy_ai(x)) < 1e-7);
    }
    CHECK_THROWS_AS(airy_ai(25), RangeError);
    CHECK_THROWS_AS(airy_bi(-13), RangeError);
}

TEST_CASE("regime names") {
    CHECK(to_string(Regime::LowTemp) != to_string(Regime::HighTemp));
    CHECK(to_string(Regime::AiryUniform) != to_string(Regime::HighTemp));
}
