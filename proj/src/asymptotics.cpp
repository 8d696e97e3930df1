#include "ising2mm/asymptotics.hpp"

#include <boost/math/special_functions/airy.hpp>

#include <cmath>
#include <numbers>

#include "ising2mm/errors.hpp"
#include "ising2mm/phase_space.hpp"
#include "ising2mm/series.hpp"

namespace ising2mm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGuard = 0.02;
constexpr double kAiryBand = 0.05;
constexpr double kAiryInterp = 2e-4;

void check_tau(double tau) {
    if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
}

void check_airy_arg(double x) {
    if (!(x >= -12 && x <= 20)) throw RangeError("Airy argument outside [-12, 20]");
}

// sign of t_cr^{-V}; every t_cr is negative
double alt_sign(int V) { return V % 2 ? -1.0 : 1.0; }

}  // namespace

std::string to_string(Regime r) {
    switch (r) {
        case Regime::LowTemp: return "LowTemp";
        case Regime::HighTemp: return "HighTemp";
        case Regime::AiryUniform: return "AiryUniform";
    }
    return "?";
}

std::array<std::complex<double>, 5> saddle_points(double tau) {
    check_tau(tau);
    const double r = 1 / std::sqrt(tau);
    return {std::complex<double>(1, 0), {-1 + r, 0}, {-1 - r, 0}, {-1, r}, {-1, -r}};
}

double dominant_saddle(double tau) {
    check_tau(tau);
    return tau < 0.25 ? 1.0 : 1 / std::sqrt(tau) - 1;
}

std::vector<double> sigma_coeff_exact_all(double tau, int vmax) {
    check_tau(tau);
    if (vmax < 1) throw DomainError("V must be at least 1");
    const auto sc = lagrange_sigma_coeffs_hp(tau, 0.0, std::size_t(vmax));
    std::vector<double> out(vmax + 1, 0.0);
    for (int v = 1; v <= vmax; ++v) out[v] = static_cast<double>(sc.taylor[v] * v);
    return out;
}

double sigma_coeff_exact(double tau, int V) { return sigma_coeff_exact_all(tau, V)[V]; }

double sigma_coeff_leading(double tau, int V) {
    check_tau(tau);
    if (std::abs(tau - 0.25) < kGuard) throw GuardBand("too close to tau = 1/4; use the Airy estimate");
    if (tau < 0.25) {
        const double pre = std::sqrt((8 * tau * tau - 3) / (16 * tau * tau - 1)) / std::sqrt(3 * kPi * V);
        return pre * std::pow(t_low(tau), -V);
    }
    // the steepest-descent orientation is fixed so the estimate carries the sign of t_high^{-V}
    const double r = std::sqrt(tau);
    const double pre = (1 - r) / (2 * std::sqrt(3 * kPi * V)) * std::sqrt((2 + r) / (tau * (2 * r - 1)));
    return pre * std::pow(t_high(tau), -V);
}

AsymptoticEstimate sigma_coeff_asymptotic(double tau, int V) {
    AsymptoticEstimate e;
    e.V = V;
    e.estimate = sigma_coeff_leading(tau, V);
    e.regime = tau < 0.25 ? Regime::LowTemp : Regime::HighTemp;
    e.exact = sigma_coeff_exact(tau, V);
    e.ratio = e.exact != 0 ? e.estimate / e.exact : std::nan("");
    return e;
}

double airy_s(double tau) {
    check_tau(tau);
    return 0.75 * std::pow(std::abs(std::log(t_low(tau) / t_high(tau))), 2.0 / 3);
}

namespace {

double airy_raw(double tau, int V) {
    const double s = airy_s(tau);
    const double R1 = std::abs((3 - 8 * tau * tau) / (1 - 16 * tau * tau));
    const double r = std::sqrt(tau);
    const double R2 = std::abs((1 - r) * (1 - r) * (2 + r) / (3 * tau * (1 - 2 * r)));
    double dp = 2 / std::sqrt(3.0) * std::sqrt(R1), dm = std::sqrt(R2);
    // past tau = 1/4 the dominant saddle moves to the other end of the coalescing pair
    if (tau > 0.25) std::swap(dp, dm);
    const double a0 = std::pow(s, 0.25) * (dp + dm) / 2;
    const double b0 = std::pow(s, -0.25) * (dp - dm) / 2;
    const double x = std::pow(double(V), 2.0 / 3) * s;
    const double pref = std::pow(t_low(tau) * t_high(tau), -0.5 * V);
    return alt_sign(V) * pref *
           (a0 * std::pow(double(V), -1.0 / 3) * airy_ai(x) - b0 * std::pow(double(V), -2.0 / 3) * airy_ai_prime(x));
}

}  // namespace

double sigma_coeff_airy_value(double tau, int V) {
    check_tau(tau);
    if (std::abs(tau - 0.25) > kAiryBand) throw DomainError("Airy estimate calibrated only for |tau - 1/4| <= 0.05");
    if (V < 1) throw DomainError("V must be at least 1");
    if (std::abs(tau - 0.25) < kAiryInterp) {
        // a0 and b0 are 0 * inf at tau = 1/4 itself
        const double lo = airy_raw(0.25 - kAiryInterp, V), hi = airy_raw(0.25 + kAiryInterp, V);
        const double w = (tau - (0.25 - kAiryInterp)) / (2 * kAiryInterp);
        return (1 - w) * lo + w * hi;
    }
    return airy_raw(tau, V);
}

AsymptoticEstimate sigma_coeff_airy(double tau, int V) {
    AsymptoticEstimate e;
    e.V = V;
    e.regime = Regime::AiryUniform;
    e.estimate = sigma_coeff_airy_value(tau, V);
    e.exact = sigma_coeff_exact(tau, V);
    e.ratio = e.exact != 0 ? e.estimate / e.exact : std::nan("");
    return e;
}

double airy_ai(double x) {
    check_airy_arg(x);
    return boost::math::airy_ai(x);
}

double airy_ai_prime(double x) {
    check_airy_arg(x);
    return boost::math::airy_ai_prime(x);
}

double airy_bi(double x) {
    check_airy_arg(x);
    return boost::math::airy_bi(x);
}

double airy_bi_prime(double x) {
    check_airy_arg(x);
    return boost::math::airy_bi_prime(x);
}

}  // namespace ising2mm
