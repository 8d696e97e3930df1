#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace ising2mm {

enum class Regime { LowTemp, HighTemp, AiryUniform };

std::string to_string(Regime r);

struct AsymptoticEstimate {
    int V = 0;
    double exact = 0;
    double estimate = 0;
    Regime regime = Regime::LowTemp;
    double ratio = 0;
};

// Critical points of G(zeta) = I(zeta; tau, 0, 0): {1, -1 +- tau^{-1/2}, -1 +- i tau^{-1/2}}.
std::array<std::complex<double>, 5> saddle_points(double tau);
double dominant_saddle(double tau);

// [zeta^{V-1}] (zeta / G(zeta))^V at H = 0, i.e. V [t^V] sigma(t), in 50-digit arithmetic.
double sigma_coeff_exact(double tau, int V);
std::vector<double> sigma_coeff_exact_all(double tau, int vmax);

// Leading saddle-point estimate away from tau = 1/4 (guard band 0.02).
double sigma_coeff_leading(double tau, int V);
AsymptoticEstimate sigma_coeff_asymptotic(double tau, int V);

// s(tau) >= 0, vanishing at tau = 1/4.
double airy_s(double tau);
double sigma_coeff_airy_value(double tau, int V);
AsymptoticEstimate sigma_coeff_airy(double tau, int V);

// Boost's Airy functions restricted to the range we validated, [-12, 20].
double airy_ai(double x);
double airy_ai_prime(double x);
double airy_bi(double x);
double airy_bi_prime(double x);

}  // namespace ising2mm
