#pragma once

#include <string>
#include <vector>

#include "ising2mm/phase_space.hpp"
#include "ising2mm/series.hpp"

namespace ising2mm {

struct FreeEnergyResult {
    double value = 0;
    std::string method;  // "u_integral" or "lambda_integral"
    double quad_error_estimate = 0;
    double sigma_used = 0;
};

FreeEnergyResult F_eval(const PhasePoint& pp, double tol = 1e-11);

// d F / d t at fixed (tau, H), from differentiating under the integral.
double F_dt(const PhasePoint& pp, double tol = 1e-11);

// Planar limit of the string equations: lambda as a function of f.
double lambda_tilde(double f, const PhasePoint& pp);
double lambda_tilde_df(double f, const PhasePoint& pp);

// f(lambda) on [0,1] by continuation from f(0) = 0.
struct FBranch {
    std::vector<double> lambda;
    std::vector<double> f;
};
FBranch f_branch(const PhasePoint& pp, int steps = 64);
double f_at(const FBranch& br, double lambda, const PhasePoint& pp);

FreeEnergyResult F_lambda_form(const PhasePoint& pp, double tol = 1e-11);

struct PlanarCoefficients {
    double f = 0;
    double R = 0;
    double S = 0;
    double Rt = 0;
    double St = 0;
    double lambda_C = 0;  // right-hand side of the tilde-side string equation
    double lambda_D = 0;  // right-hand side of the plain-side string equation
};

PlanarCoefficients planar_relations(double f, const PhasePoint& pp);

// Planar free energy of the quartic one-matrix model.
double F_one_matrix(double t, double tol = 1e-12);

template <class T>
TruncatedSeries<T> F_series_t(const T& tau, const T& C, std::size_t order) {
    using S = TruncatedSeries<T>;
    const std::size_t M = order + 2;
    const S g = sigma_equation_series(tau, C, M + 1);
    const S sigma = g.truncated(M).revert();

    // G(u)/u and G(u)^2/u as series in u, integrated termwise
    S g_over_u(M);
    for (std::size_t k = 0; k <= M; ++k) g_over_u[k] = g[k + 1];
    const S I1 = g_over_u.integral();
    const S g2_over_u = g_over_u * g.truncated(M);
    const S I2 = g2_over_u.integral();

    const S I1s = S::compose(I1, sigma);
    const S I2s = S::compose(I2, sigma);
    S out(order);
    // log((1 - tau^2) sigma / (-3t)): sigma/t shifted down by one
    S ratio(order);
    const T pref = (T(1) - tau * tau) / T(-3);
    for (std::size_t k = 0; k <= order; ++k) ratio[k] = sigma[k + 1] * pref;
    const S lg = ratio.log();
    for (std::size_t k = 0; k <= order; ++k) {
        out[k] = lg[k] / 2 - I1s[k + 1] + I2s[k + 2] / 2;
    }
    out[0] += T(3) / 4;
    return out;
}

TruncatedSeries<double> F_series(double tau, double h, std::size_t order);
TruncatedSeries<Real50> F_series_hp(double tau, double h, std::size_t order);

}  // namespace ising2mm
