#include "ising2mm/free_energy.hpp"

#include <algorithm>
#include <cmath>

#include "ising2mm/errors.hpp"
#include "ising2mm/quadrature.hpp"

namespace ising2mm {

namespace {

// G(u)/u, finite at u = 0
double g_over_u(double u, double tau, double C) {
    double v = -(tau * tau / 9) * (u * u - 3) - 1.0 / (3 * (1 + u) * (1 + u));
    if (C != 1.0) {
        const double d = (1 - u) * (1 + u);
        v += (2.0 / 3) * u * (C - 1) / (d * d);
    }
    return v;
}

void require_interior(const PhasePoint& pp) {
    if (!(pp.tau > 0 && pp.tau < 1)) throw DomainError("tau must lie in (0,1)");
    if (!(pp.t < 0)) throw DomainError("t must be negative");
}

}  // namespace

FreeEnergyResult F_eval(const PhasePoint& pp, double tol) {
    require_interior(pp);
    const SigmaSolution sol = solve_sigma(pp);
    const double tau = pp.tau, t = pp.t, C = std::cosh(pp.h), s = sol.sigma;
    // guard against solver drift: lambda(sigma) must be 1
    if (std::abs(lambda_eval(s, pp) - 1) > 1e-8 && !sol.hit_branch_point)
        throw NoConvergence("lambda(sigma) != 1 after the sigma solve");
    auto integrand = [&](double u) {
        const double gu = g_over_u(u, tau, C);
        return gu / t - 0.5 * gu * gu * u / (t * t);
    };
    const QuadResult q = integrate_gk15(integrand, 0.0, s, tol);
    FreeEnergyResult r;
    r.value = 0.75 + 0.5 * std::log((1 - tau * tau) * s / (-3 * t)) - q.value;
    r.method = "u_integral";
    r.quad_error_estimate = q.error;
    r.sigma_used = s;
    return r;
}

double F_dt(const PhasePoint& pp, double tol) {
    require_interior(pp);
    const double s = solve_sigma(pp).sigma;
    const double tau = pp.tau, t = pp.t, C = std::cosh(pp.h);
    auto integrand = [&](double u) {
        const double gu = g_over_u(u, tau, C);
        return (gu / t - gu * gu * u / (t * t)) / t;
    };
    return -0.5 / t + integrate_gk15(integrand, 0.0, s, tol).value;
}

double lambda_tilde(double f, const PhasePoint& pp) {
    const double tau = pp.tau, t = pp.t, C = std::cosh(pp.h);
    const double d1 = tau - 3 * t * f;
    const double d2 = tau * tau - 9 * t * t * f * f;
    if (d1 == 0 || d2 == 0) throw PoleError("pole of the planar string equation");
    return -tau * f + 3 * t * t * f * f * f / tau + tau * f / (d1 * d1) + 6 * tau * tau * t * f * f * (C - 1) / (d2 * d2);
}

double lambda_tilde_df(double f, const PhasePoint& pp) {
    const double tau = pp.tau, t = pp.t, C = std::cosh(pp.h);
    const double d1 = tau - 3 * t * f;
    const double d2 = tau * tau - 9 * t * t * f * f;
    if (d1 == 0 || d2 == 0) throw PoleError("pole of the planar string equation");
    return -tau + 9 * t * t * f * f / tau + tau * (tau + 3 * t * f) / (d1 * d1 * d1) +
           12 * tau * tau * t * (C - 1) * f * (tau * tau + 9 * t * t * f * f) / (d2 * d2 * d2);
}

namespace {

bool newton_f(double lam, double& f, const PhasePoint& pp) {
    for (int it = 0; it < 60; ++it) {
        const double d = lambda_tilde_df(f, pp);
        if (d <= 0 || !std::isfinite(d)) return false;  // fold: the branch has dlambda/df > 0
        const double step = (lambda_tilde(f, pp) - lam) / d;
        f -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(f))) return true;
    }
    return std::abs(lambda_tilde(f, pp) - lam) < 1e-13;
}

}  // namespace

FBranch f_branch(const PhasePoint& pp, int steps) {
    require_interior(pp);
    FBranch br;
    br.lambda.push_back(0);
    br.f.push_back(0);
    double f = 0;
    for (int k = 1; k <= steps; ++k) {
        const double lam = double(k) / steps;
        // secant predictor from the last two points
        double guess = f + (lam - br.lambda.back()) / lambda_tilde_df(f, pp);
        if (!newton_f(lam, guess, pp) || guess < f)
            throw ContinuationFailure("f-branch folds before lambda = 1");
        f = guess;
        br.lambda.push_back(lam);
        br.f.push_back(f);
    }
    return br;
}

double f_at(const FBranch& br, double lam, const PhasePoint& pp) {
    if (lam <= 0) return 0;
    const auto it = std::upper_bound(br.lambda.begin(), br.lambda.end(), lam);
    const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - br.lambda.begin(), 1), br.lambda.size() - 1);
    const double l0 = br.lambda[i - 1], l1 = br.lambda[i];
    double f = br.f[i - 1] + (br.f[i] - br.f[i - 1]) * (lam - l0) / (l1 - l0);
    if (!newton_f(lam, f, pp)) throw ContinuationFailure("Newton failed on the f-branch");
    return f;
}

FreeEnergyResult F_lambda_form(const PhasePoint& pp, double tol) {
    require_interior(pp);
    const FBranch br = f_branch(pp);
    const double tau = pp.tau;
    const double ref = (1 - tau * tau) / tau;
    auto integrand = [&](double lam) {
        if (lam <= 0) return 0.0;
        const double f = f_at(br, lam, pp);
        return (1 - lam) * std::log(f * ref / lam);
    };
    const QuadResult q = integrate_gk15(integrand, 0.0, 1.0, tol);
    FreeEnergyResult r;
    r.value = q.value;
    r.method = "lambda_integral";
    r.quad_error_estimate = q.error;
    r.sigma_used = -3 * pp.t / tau * br.f.back();
    return r;
}

PlanarCoefficients planar_relations(double f, const PhasePoint& pp) {
    const double tau = pp.tau, t = pp.t;
    const double em = std::exp(-pp.h), ep = std::exp(pp.h);
    const double den = tau * tau - 9 * t * t * f * f;
    if (den == 0) throw PoleError("tau^2 = 9 t^2 f^2");
    PlanarCoefficients pc;
    pc.f = f;
    pc.S = t * em / tau * f * f * f;
    pc.St = t * ep / tau * f * f * f;
    pc.R = (tau + 3 * t * em * f) * f / den;
    pc.Rt = (tau + 3 * t * ep * f) * f / den;
    pc.lambda_C = -tau * f + pc.Rt + 3 * t * em * (pc.St + pc.Rt * pc.Rt);
    pc.lambda_D = -tau * f + pc.R + 3 * t * ep * (pc.S + pc.R * pc.R);
    return pc;
}

double F_one_matrix(double t, double tol) {
    if (!(1 + 12 * t > 0)) throw DomainError("the one-matrix free energy needs t > -1/12");
    if (t == 0) return 0;
    // log[(sqrt(1+12 t l) - 1)/(6 t l)] written without the cancellation at small t l
    auto integrand = [&](double lam) { return (1 - lam) * std::log(2 / (1 + std::sqrt(1 + 12 * t * lam))); };
    return integrate_gk15(integrand, 0.0, 1.0, tol).value;
}

TruncatedSeries<double> F_series(double tau, double h, std::size_t order) {
    if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
    return F_series_t<double>(tau, std::cosh(h), order);
}

TruncatedSeries<Real50> F_series_hp(double tau, double h, std::size_t order) {
    if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
    return F_series_t<Real50>(Real50(tau), cosh(Real50(h)), order);
}

}  // namespace ising2mm
