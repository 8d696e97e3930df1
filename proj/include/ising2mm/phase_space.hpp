#pragma once

#include <cmath>
#include <string>

namespace ising2mm {

struct ABCPoint {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
};

// Closed region R: 0 < b <= 1, 1 <= a <= 1/b, 0 < c <= b.
bool in_region(const ABCPoint& p, double slack = 1e-12);
bool in_region_interior(const ABCPoint& p);

struct PhasePoint {
    double tau = 0.0;
    double t = 0.0;
    double h = 0.0;  // magnetic field H, q = e^H
    double q() const { return std::exp(h); }
};

PhasePoint phase_from_q(double tau, double t, double q);

struct SigmaSolution {
    double sigma = 0.0;
    bool converged = false;
    int steps = 0;
    bool hit_branch_point = false;
};

enum class RegionLabel {
    GenusZeroInterior,
    LowTempSurface,
    HighTempSurface,
    GammaB,
    Multicritical,
    Outside,
    BoundaryT0,
    BoundaryTau0,
    BoundaryTau1,
    BoundaryQWall,
};

std::string to_string(RegionLabel r);

// (a,b,c) -> (tau, t, q). Throws DomainError outside R when strict.
PhasePoint map_abc(const ABCPoint& p, bool strict = true);

// Scale constant A(a,b,c); B is A(a,c,b).
double scale_A(double a, double b, double c);

// det d(tau,t,q)/d(a,b,c)
double jacobian_abc(const ABCPoint& p);

// The sigma equation and its sigma-derivative.
double I_eval(double sigma, const PhasePoint& pp);
double I_dsigma(double sigma, const PhasePoint& pp);

// G(sigma) = I(sigma; tau, 0, q), so that I = G - t.
double G_eval(double sigma, double tau, double cosh_h);
double G_dsigma(double sigma, double tau, double cosh_h);
double G_d2sigma(double sigma, double tau, double cosh_h);

double lambda_eval(double u, const PhasePoint& pp);
double lambda_du(double u, const PhasePoint& pp);

struct SigmaOptions {
    double newton_tol = 1e-13;
    int max_newton = 50;
    int newton_halving_threshold = 6;
    double branch_threshold = 1e-7;
    int initial_divisions = 32;
};

SigmaSolution solve_sigma(const PhasePoint& pp, const SigmaOptions& opt = {});

double t_low(double tau);
double t_high(double tau);

// Critical coupling; closed form at h=0, double-root solver otherwise.
double t_critical(double tau, double h);

// Numerical double-root solver for I = dI/dsigma = 0 along the physical branch.
struct DoubleRoot {
    double sigma;
    double t;
};
DoubleRoot critical_double_root(double tau, double h);

RegionLabel classify(const PhasePoint& pp, double tol = 1e-9);

PhasePoint critical_surface_low(double b, double c);
PhasePoint critical_surface_high(double b, double c);
PhasePoint critical_curve_b(double c);

// Discriminant polynomial in (tau, t, C = cosh H).
double discriminant_J(double tau, double t, double coshH);
// |J| divided by the sum of absolute values of its monomials.
double discriminant_J_scaled(double tau, double t, double coshH);

// Damped Newton inverse of map_abc using sigma = a^2 b c as third equation.
ABCPoint invert_phase_point(const PhasePoint& pp, double sigma);

}  // namespace ising2mm
