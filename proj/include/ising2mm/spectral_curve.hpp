#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "ising2mm/phase_space.hpp"

namespace ising2mm {

using cplx = std::complex<double>;

struct CurveData {
    ABCPoint abc;
    double A = 0;
    double B = 0;
    double alpha = 0;
    double beta = 0;
    PhasePoint phase;
    double sigma = 0;
};

CurveData curve_from_abc(const ABCPoint& p, bool strict = true);

// X(u) = A(u + (a^2+b^2)/u - a^2 b^2/(3u^3)),  Y(u) = B(1/u + (a^2+c^2)u - a^2 c^2 u^3/3)
cplx X_of_u(const CurveData& cd, cplx u);
cplx Y_of_u(const CurveData& cd, cplx u);
cplx dX_du(const CurveData& cd, cplx u);
cplx dY_du(const CurveData& cd, cplx u);

// Polar description of the cut preimages; r_minus is real only for sin^2 theta <= 3/4.
double r_plus(double theta, double a, double b);
double r_minus(double theta, double a, double b);

// Sheet of a point in the u-plane: 1 outside r_plus, 4 / 3 inside the right / left lobe of
// r_minus, 2 elsewhere.
int sheet_of_u(const CurveData& cd, cplx u);

std::array<cplx, 4> quartic_preimages(const CurveData& cd, cplx z);

// side = +1 or -1 selects the boundary value from above or below when z sits on a cut.
cplx invert_sheet(const CurveData& cd, cplx z, int sheet, int side = +1);

// tau * Omega(u), an antiderivative of tau Y X'.
cplx omega_eval(const CurveData& cd, cplx u);
// The alternative closed form with the other denominator; kept to quantify the mismatch.
cplx omega_alternative(const CurveData& cd, cplx u);

struct OmegaConstants {
    double ell0 = 0;
    double ell1 = 0;
    double C1 = 0;
    double C2 = 0;
};

// Closed-form expressions for the expansion constants.
OmegaConstants omega_constants_closed_form(const CurveData& cd);

// Coefficients read off the large-z expansions of tau Omega on sheets 1 and 3.
struct OmegaExpansion {
    double sheet1_constant = 0;  // tau Omega_1 - (tq z^4/4 + z^2/2 - log z) -> this
    double sheet3_z43 = 0;       // coefficient of z^{4/3}
    double sheet3_z23 = 0;       // coefficient of z^{2/3}
    double sheet3_constant = 0;  // real part; log of the negative preimage contributes i pi
    double sheet3_zm23 = 0;      // coefficient of z^{-2/3}
    double sheet3_zm43 = 0;      // coefficient of z^{-4/3}
};

OmegaExpansion omega_expansion(const CurveData& cd);

enum class Measure { Mu, Nu };
enum class Endpoint { PlusAlpha, MinusAlpha, PlusBeta, MinusBeta };

struct MeasureSample {
    double s = 0;
    double density = 0;
    Measure which = Measure::Mu;
};

// mu: theta in (0, pi) on r_plus; nu: theta in (0, pi/3) on the right lobe of r_minus
// (theta in (2pi/3, pi) gives the mirror image on (-inf, -beta]).
MeasureSample measure_density(const CurveData& cd, Measure which, double theta);

// |ds/dtheta| along the parametrization used by measure_density.
double measure_ds_dtheta(const CurveData& cd, Measure which, double theta);

double measure_mass(const CurveData& cd, double tol = 1e-10);

struct ExponentFit {
    double slope = 0;
    int points = 0;
    double window_lo = 0;
    double window_hi = 0;
};

ExponentFit endpoint_exponent_fit(const CurveData& cd, Measure which, Endpoint end, int npoints = 40);
double endpoint_exponent(const CurveData& cd, Measure which, Endpoint end);

struct SexticCoefficients {
    double s2q = 0;
    double s2qi = 0;
    double s1 = 0;
    double s0 = 0;
    // tau q, tau/q, -t, -q, -1/q, t/tau
    std::array<double, 6> fixed{};
};

SexticCoefficients sextic_coefficients(const CurveData& cd);

// |S(X(u), Y(u))| over the largest monomial; s1_factor scales the XY coefficient.
double sextic_residual(const CurveData& cd, cplx u, double s1_factor = 1.0);

struct LensingCertificate {
    bool pass = true;
    double q1 = 0;
    double q1_tilde = 0;
    double min_margin = 0;
    std::string witness;  // "(theta, inequality)" of the first violation
    double witness_theta = 0;
};

double lensing_q1(const ABCPoint& p);
double lensing_q1_tilde(const ABCPoint& p);

// Non-throwing evaluation; check_lensing throws CertificateFailure on a violation.
LensingCertificate lensing_certificate(const ABCPoint& p, int n_theta = 256);
LensingCertificate check_lensing(const ABCPoint& p, int n_theta = 256);

}  // namespace ising2mm
