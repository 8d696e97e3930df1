#include "ising2mm/spectral_curve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ising2mm/errors.hpp"
#include "ising2mm/quadrature.hpp"
#include "ising2mm/series.hpp"

namespace ising2mm {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }

double polar_disc(double theta, double a, double b) {
    const double s = std::sin(theta);
    return (4.0 / 3) * a * a * b * b * s * s + 0.25 * sq(a * a - b * b);
}

}  // namespace

CurveData curve_from_abc(const ABCPoint& p, bool strict) {
    CurveData cd;
    cd.phase = map_abc(p, strict);
    cd.abc = p;
    cd.A = scale_A(p.a, p.b, p.c);
    cd.B = scale_A(p.a, p.c, p.b);
    cd.sigma = p.a * p.a * p.b * p.c;
    cd.alpha = X_of_u(cd, p.a).real();
    cd.beta = X_of_u(cd, p.b).real();
    return cd;
}

cplx X_of_u(const CurveData& cd, cplx u) {
    const double a2 = sq(cd.abc.a), b2 = sq(cd.abc.b);
    return cd.A * (u + (a2 + b2) / u - a2 * b2 / (3.0 * u * u * u));
}

cplx Y_of_u(const CurveData& cd, cplx u) {
    const double a2 = sq(cd.abc.a), c2 = sq(cd.abc.c);
    return cd.B * (1.0 / u + (a2 + c2) * u - a2 * c2 * u * u * u / 3.0);
}

cplx dX_du(const CurveData& cd, cplx u) {
    const double a2 = sq(cd.abc.a), b2 = sq(cd.abc.b);
    const cplx u2 = u * u;
    return cd.A * (u2 - a2) * (u2 - b2) / (u2 * u2);
}

cplx dY_du(const CurveData& cd, cplx u) {
    const double a2 = sq(cd.abc.a), c2 = sq(cd.abc.c);
    return cd.B * (-1.0 / (u * u) + (a2 + c2) - a2 * c2 * u * u);
}

double r_plus(double theta, double a, double b) {
    return std::sqrt(0.5 * (a * a + b * b) + std::sqrt(polar_disc(theta, a, b)));
}

double r_minus(double theta, double a, double b) {
    const double v = 0.5 * (a * a + b * b) - std::sqrt(polar_disc(theta, a, b));
    return v > 0 ? std::sqrt(v) : 0.0;
}

namespace {

// Signed log-distance of u to the sheet boundaries; small means ambiguous.
struct SheetInfo {
    int sheet;
    double margin;
};

SheetInfo locate(const CurveData& cd, cplx u) {
    const double a = cd.abc.a, b = cd.abc.b;
    const double r2 = std::norm(u);
    const double th = std::arg(u);
    const double sroot = std::sqrt(polar_disc(th, a, b));
    const double mid = 0.5 * (a * a + b * b);
    const double rp2 = mid + sroot;
    const double dplus = std::abs(std::log(r2 / rp2));
    if (r2 > rp2) return {1, dplus};
    const double s = std::sin(th);
    if (s * s < 0.75) {
        const double rm2 = mid - sroot;
        if (rm2 > 0 && r2 < rm2) {
            return {std::cos(th) > 0 ? 4 : 3, std::min(dplus, std::abs(std::log(r2 / rm2)))};
        }
        const double dminus = rm2 > 0 ? std::abs(std::log(r2 / rm2)) : std::abs(s * s - 0.75);
        return {2, std::min(dplus, dminus)};
    }
    return {2, dplus};
}

}  // namespace

int sheet_of_u(const CurveData& cd, cplx u) { return locate(cd, u).sheet; }

std::array<cplx, 4> quartic_preimages(const CurveData& cd, cplx z) {
    // 3A u^4 - 3z u^3 + 3A(a^2+b^2) u^2 - A a^2 b^2 = 0, monic companion form
    const double a2 = sq(cd.abc.a), b2 = sq(cd.abc.b);
    const cplx c3 = -z / cd.A;
    const cplx c2 = a2 + b2;
    const cplx c0 = -a2 * b2 / 3.0;
    Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
    M(1, 0) = M(2, 1) = M(3, 2) = 1.0;
    M(0, 3) = -c0;
    M(1, 3) = 0.0;
    M(2, 3) = -c2;
    M(3, 3) = -c3;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(M, false);
    std::array<cplx, 4> out;
    for (int i = 0; i < 4; ++i) {
        cplx u = es.eigenvalues()[i];
        for (int it = 0; it < 4; ++it) {
            const cplx f = ((u + c3) * u + c2) * u * u + c0;
            const cplx df = ((4.0 * u + 3.0 * c3) * u + 2.0 * c2) * u;
            if (df == 0.0) break;
            u -= f / df;
        }
        out[i] = u;
    }
    return out;
}

cplx invert_sheet(const CurveData& cd, cplx z, int sheet, int side) {
    if (sheet < 1 || sheet > 4) throw DomainError("sheet must be 1..4");
    const double zscale = std::max(1.0, std::abs(z));
    for (int attempt = 0; attempt < 2; ++attempt) {
        const cplx zz = attempt == 0 ? z : z + cplx(0, side * 1e-12 * zscale);
        const auto roots = quartic_preimages(cd, zz);
        double min_gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                min_gap = std::min(min_gap, std::abs(roots[i] - roots[j]) / std::max(1.0, std::abs(roots[i])));
        if (min_gap < 1e-8) throw BranchPointProximity("preimages cluster near a branch point");
        int found = -1, count = 0;
        bool ambiguous = false;
        for (int i = 0; i < 4; ++i) {
            const SheetInfo si = locate(cd, roots[i]);
            if (si.sheet == sheet) {
                found = i;
                ++count;
                if (si.margin < 1e-9) ambiguous = true;
            }
        }
        if (count == 1 && !ambiguous) return roots[found];
    }
    throw AmbiguousSheet("cannot assign a unique preimage to the requested sheet");
}

cplx omega_eval(const CurveData& cd, cplx u) {
    if (u == 0.0) throw PoleError("Omega has a pole at u = 0");
    const double a2 = sq(cd.abc.a), b2 = sq(cd.abc.b), c2 = sq(cd.abc.c), a4 = a2 * a2;
    const double K = a4 * b2 * c2 + 3 * a4 + 3 * a2 * b2 + 3 * a2 * c2 + 3 * b2 * c2 - 3;
    const cplx u2 = u * u;
    const cplx poly = -0.25 * a2 * c2 * u2 * u2 + 0.5 * (a4 * c2 + a2 * b2 * c2 + 3 * a2 + 3 * c2) * u2 -
                      1.5 * (a4 * b2 + a2 * b2 * c2 - a2 - b2) / u2 - 0.75 * a2 * b2 / (u2 * u2);
    return poly / K - std::log(u);
}

cplx omega_alternative(const CurveData& cd, cplx u) {
    if (u == 0.0) throw PoleError("Omega has a pole at u = 0");
    const double a2 = sq(cd.abc.a), b2 = sq(cd.abc.b), c2 = sq(cd.abc.c), b4 = b2 * b2;
    const double D = a2 * b4 * c2 + 3 * a2 * b2 + 3 * a2 * c2 + 3 * b4 + 3 * b2 * c2 - 3;
    const cplx u2 = u * u;
    const cplx poly = -0.25 * b2 * c2 * u2 * u2 - 0.75 * a2 * b2 / (u2 * u2) +
                      0.5 * (a2 * b2 * c2 + b4 * c2 + 3 * b2 + 3 * c2) * u2 -
                      1.5 * (a2 * b4 + a2 * b2 * c2 - a2 - b2) / u2;
    return poly / D - std::log(u);
}

OmegaConstants omega_constants_closed_form(const CurveData& cd) {
    const double a = cd.abc.a, b = cd.abc.b, c = cd.abc.c;
    const double a2 = a * a, b2 = b * b, c2 = c * c;
    const double a4 = a2 * a2, b4 = b2 * b2, a6 = a4 * a2, b6 = b4 * b2, a8 = a4 * a4, b8 = b4 * b4;
    const double a10 = a8 * a2;
    const double K = a4 * b2 * c2 + 3 * a4 + 3 * a2 * b2 + 3 * a2 * c2 + 3 * b2 * c2 - 3;
    const double tau = cd.phase.tau, t = cd.phase.t, q = cd.phase.q();
    OmegaConstants oc;
    oc.ell0 = (9 * a6 * c2 + 20 * a4 * b2 * c2 + 9 * a2 * b4 * c2 + 18 * a4 + 18 * a2 * b2 + 18 * a2 * c2 + 18 * b2 * c2) /
                  (6 * K) -
              std::log(cd.A);
    oc.ell1 = -3 * (2 * a6 * b2 + 2 * a4 * b4 + 2 * a4 * b2 * c2 + 2 * a2 * b4 * c2 + a4 + 4 * a2 * b2 + b4) /
                  (2 * a2 * b2 * K) -
              std::log(a2 * b2 * cd.A / 3) / 3;
    oc.C1 = std::pow(c, 1.5) * std::pow(tau, 7.0 / 3) /
            (18 * std::pow(b, 1.5) * std::pow(-t, 4.0 / 3) * std::pow(q, 1.0 / 6)) *
            (3 * a8 * b4 * c2 + 3 * a6 * b6 * c2 + 3 * a8 * b2 + 3 * a6 * b4 + 3 * a6 * b2 * c2 + 3 * a4 * b6 +
             3 * a4 * b4 * c2 + 3 * a2 * b6 * c2 - a6 - 9 * a4 * b2 - 9 * a2 * b4 - b6);
    oc.C2 = -c2 * std::pow(tau, 8.0 / 3) / (54 * b2 * std::pow(-t, 5.0 / 3) * std::pow(q, 1.0 / 3)) *
            (6 * a10 * b4 * c2 + 9 * a8 * b6 * c2 + 6 * a6 * b8 * c2 + 2 * a10 * b2 - 6 * a8 * b4 + 2 * a8 * b2 * c2 -
             6 * a6 * b6 - 6 * a6 * b4 * c2 + 2 * a4 * b8 - 6 * a4 * b6 * c2 + 2 * a2 * b8 * c2 - a8 - 10 * a6 * b2 -
             12 * a4 * b4 - 10 * a2 * b6 - b8);
    return oc;
}

OmegaExpansion omega_expansion(const CurveData& cd) {
    using S = TruncatedSeries<double>;
    const double a2 = sq(cd.abc.a), b2 = sq(cd.abc.b), c2 = sq(cd.abc.c), a4 = a2 * a2;
    const double K = a4 * b2 * c2 + 3 * a4 + 3 * a2 * b2 + 3 * a2 * c2 + 3 * b2 * c2 - 3;
    const double A = cd.A, e = a2 + b2, f = -a2 * b2 / 3;
    const double tq = cd.phase.t * cd.phase.q();
    OmegaExpansion out;

    // Sheet 1: with s = 1/u, z = A u (1 + e s^2 + f s^4); the polynomial parts cancel and
    // only the constant terms of z^4, z^2 and log z survive.
    out.sheet1_constant = -0.25 * tq * std::pow(A, 4) * (4 * f + 6 * e * e) - A * A * e + std::log(A);

    // Sheet 3: w = z^{-1/3}, u = w v(w) with
    // 3A w^4 v^4 - 3 v^3 + 3A e w^2 v^2 - A a^2 b^2 = 0 and v(0) < 0.
    constexpr std::size_t N = 12;
    S v = S::constant(N, -std::cbrt(A * a2 * b2 / 3));
    S w2(N), w4(N);
    w2[2] = 1;
    w4[4] = 1;
    const S cst = S::constant(N, -A * a2 * b2);
    for (int it = 0; it < 8; ++it) {
        const S v2 = v * v, v3 = v2 * v, v4 = v2 * v2;
        const S F = (3 * A) * (w4 * v4) - 3.0 * v3 + (3 * A * e) * (w2 * v2) + cst;
        const S dF = (12 * A) * (w4 * v3) - 9.0 * v2 + (6 * A * e) * (w2 * v);
        v -= F / dF;
    }
    const S v2 = v * v, v4 = v2 * v2;
    const S vm2 = v2.inv(), vm4 = v4.inv();
    const double v0 = v[0];
    const S logv = (v * (1.0 / v0)).log();  // log(v/v0), zero constant term
    const double p2 = 0.5 * (a4 * c2 + a2 * b2 * c2 + 3 * a2 + 3 * c2);
    const double m2 = -1.5 * (a4 * b2 + a2 * b2 * c2 - a2 - b2);
    const double m4 = -0.75 * a2 * b2;
    auto coeff = [&](int k) {
        auto at = [&](const S& s, int idx) { return (idx >= 0 && idx <= int(N)) ? s[idx] : 0.0; };
        double val = (-0.25 * a2 * c2 * at(v4, k - 4) + p2 * at(v2, k - 2) + m2 * at(vm2, k + 2) + m4 * at(vm4, k + 4)) / K;
        val -= at(logv, k);
        if (k == 0) val -= std::log(std::abs(v0));
        return val;
    };
    out.sheet3_z43 = coeff(-4);
    out.sheet3_z23 = coeff(-2);
    out.sheet3_constant = coeff(0);
    out.sheet3_zm23 = coeff(2);
    out.sheet3_zm43 = coeff(4);
    return out;
}

namespace {

cplx cut_point(const CurveData& cd, Measure which, double theta) {
    const double a = cd.abc.a, b = cd.abc.b;
    const double r = which == Measure::Mu ? r_plus(theta, a, b) : r_minus(theta, a, b);
    return std::polar(r, theta);
}

cplx cut_tangent(const CurveData& cd, Measure which, double theta) {
    const double a = cd.abc.a, b = cd.abc.b;
    const double r = which == Measure::Mu ? r_plus(theta, a, b) : r_minus(theta, a, b);
    const double sd = std::sqrt(polar_disc(theta, a, b));
    double dr2 = sd > 0 ? (4.0 / 3) * a * a * b * b * std::sin(theta) * std::cos(theta) / sd : 0.0;
    if (which == Measure::Nu) dr2 = -dr2;
    const double dr = r > 0 ? dr2 / (2 * r) : 0.0;
    return cplx(dr, r) * std::polar(1.0, theta);
}

void check_theta(Measure which, double theta) {
    if (which == Measure::Mu) {
        if (!(theta > 0 && theta < kPi)) throw DomainError("mu needs theta in (0, pi)");
    } else {
        const bool right = theta > 0 && theta < kPi / 3;
        const bool left = theta > 2 * kPi / 3 && theta < kPi;
        if (!(right || left)) throw DomainError("nu needs theta in (0, pi/3) or (2pi/3, pi)");
    }
}

}  // namespace

MeasureSample measure_density(const CurveData& cd, Measure which, double theta) {
    check_theta(which, theta);
    const cplx u = cut_point(cd, which, theta);
    MeasureSample ms;
    ms.which = which;
    ms.s = X_of_u(cd, u).real();
    ms.density = cd.phase.tau / kPi * std::abs(Y_of_u(cd, u).imag());
    return ms;
}

double measure_ds_dtheta(const CurveData& cd, Measure which, double theta) {
    check_theta(which, theta);
    const cplx u = cut_point(cd, which, theta);
    return std::abs((dX_du(cd, u) * cut_tangent(cd, which, theta)).real());
}

double measure_mass(const CurveData& cd, double tol) {
    auto f = [&](double th) {
        if (th <= 0 || th >= kPi) return 0.0;
        return measure_density(cd, Measure::Mu, th).density * measure_ds_dtheta(cd, Measure::Mu, th);
    };
    return integrate_gk15(f, 0.0, kPi, tol).value;
}

ExponentFit endpoint_exponent_fit(const CurveData& cd, Measure which, Endpoint end, int npoints) {
    const bool at_alpha = end == Endpoint::PlusAlpha || end == Endpoint::MinusAlpha;
    if ((which == Measure::Mu) != at_alpha) throw DomainError("mu ends at +-alpha, nu at +-beta");
    const bool minus = end == Endpoint::MinusAlpha || end == Endpoint::MinusBeta;
    const double gap = cd.beta - cd.alpha;
    const bool touching = gap <= 1e-12 * cd.alpha;
    if (!touching && gap < 1e-7 * cd.alpha)
        throw InsufficientWindow("branch points too close for the fit window");
    const double scale = touching ? cd.alpha : gap;
    const double endpoint = at_alpha ? cd.alpha : cd.beta;

    // distance from the endpoint as a function of theta, measured from the endpoint's side
    const double th_max = which == Measure::Mu ? kPi / 2 : kPi / 3 * (1 - 1e-9);
    auto dist = [&](double th) {
        const double tt = minus ? kPi - th : th;
        return std::abs(measure_density(cd, which, tt).s - (minus ? -endpoint : endpoint));
    };
    auto dens = [&](double th) { return measure_density(cd, which, minus ? kPi - th : th).density; };

    ExponentFit fit;
    fit.window_lo = 1e-6 * scale;
    fit.window_hi = 1e-3 * scale;
    std::vector<double> xs, ys;
    for (int k = 0; k < npoints; ++k) {
        const double target = scale * std::pow(10.0, -6 + 3.0 * k / (npoints - 1));
        double lo = 0, hi = th_max;
        if (dist(hi) < target) continue;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (dist(mid) < target) lo = mid; else hi = mid;
        }
        const double th = 0.5 * (lo + hi);
        const double d = dist(th), rho = dens(th);
        if (!(d > 0 && rho > 0)) continue;
        xs.push_back(std::log(d));
        ys.push_back(std::log(rho));
    }
    if (xs.size() < 8) throw InsufficientWindow("too few usable points in the fit window");
    const double n = double(xs.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    fit.slope = sxy / sxx;
    fit.points = int(xs.size());
    return fit;
}

double endpoint_exponent(const CurveData& cd, Measure which, Endpoint end) {
    return endpoint_exponent_fit(cd, which, end).slope;
}

namespace {

SexticCoefficients sextic_raw(double tau, double t, double q, double s) {
    SexticCoefficients sc;
    const double tau2 = tau * tau, s2 = s * s, s3 = s2 * s, s4 = s2 * s2, s5 = s4 * s, s6 = s3 * s3, s8 = s4 * s4;
    auto s2f = [&](double qq) {
        return (1 - 6 * s - 3 * s2) / (27 * tau * t * std::pow(s + 1, 3)) -
               (s3 * tau2 + 3 * s2 * tau2 - 9 * s * tau2 - 27 * tau2 + 1) / (27 * tau * t) -
               (qq - 1) * s / (27 * tau * t * std::pow(s2 - 1, 3)) *
                   ((9 * tau2 - 9) + 9 * (qq + 1) * s + (4 / qq - (28 * tau2 + 6)) * s2 - 6 * (qq + 1) * s3 +
                    (30 * tau2 + 3) * s4 + (qq + 1) * s5 - 12 * s6 * tau2 + s8 * tau2);
    };
    sc.s2q = s2f(q);
    sc.s2qi = s2f(1 / q);
    sc.s1 = -8 * (5 * s + 3) / (81 * sq(s + 1) * t) -
            (s6 * tau2 - 15 * s4 * tau2 + 27 * s2 * tau2 - 3 * s2 + 243 * tau2 + 24 * s + 171) / (243 * t) -
            4 * s3 * (s2 + 3) / (81 * t * sq(s2 - 1)) * (q + 1 / q - 2);
    const double inner = 15 * q * s6 * tau2 + 9 * q * s5 * t + (12 - 111 * tau2) * q * s4 +
                         15 * (q * q - 1.2 * t * q + 1) * s3 + (177 * tau2 - 15) * q * s2 -
                         54 * (q * q - t * q / 6 + 1) * s + 81 * (1 - tau2) * q;
    sc.s0 = -s / (19683 * t * t * tau * q * q * std::pow(s2 - 1, 4)) * inner * inner;
    sc.fixed = {tau * q, tau / q, -t, -q, -1 / q, t / tau};
    return sc;
}

}  // namespace

SexticCoefficients sextic_coefficients(const CurveData& cd) {
    if (std::abs(cd.sigma - 1) > 1e-6) {
        return sextic_raw(cd.phase.tau, cd.phase.t, cd.phase.q(), cd.sigma);
    }
    // sigma = 1 is a removable singularity of the coefficient formulas; take the limit
    // along b, c -> (1 -+ d) b, c with a symmetric fourth-order extrapolation.
    auto at = [&](double d) {
        const ABCPoint p{cd.abc.a, cd.abc.b * (1 - d), cd.abc.c * (1 - d)};
        const PhasePoint pp = map_abc(p, false);
        return sextic_raw(pp.tau, pp.t, pp.q(), p.a * p.a * p.b * p.c);
    };
    constexpr double d = 1e-3;
    const SexticCoefficients p1 = at(d), m1 = at(-d), p2 = at(2 * d), m2 = at(-2 * d);
    auto ex = [](double f1, double g1, double f2, double g2) { return (4 * (f1 + g1) - (f2 + g2)) / 6; };
    SexticCoefficients sc = sextic_raw(cd.phase.tau, cd.phase.t, cd.phase.q(), 0.5);
    sc.s2q = ex(p1.s2q, m1.s2q, p2.s2q, m2.s2q);
    sc.s2qi = ex(p1.s2qi, m1.s2qi, p2.s2qi, m2.s2qi);
    sc.s1 = ex(p1.s1, m1.s1, p2.s1, m2.s1);
    sc.s0 = ex(p1.s0, m1.s0, p2.s0, m2.s0);
    return sc;
}

double sextic_residual(const CurveData& cd, cplx u, double s1_factor) {
    const SexticCoefficients sc = sextic_coefficients(cd);
    const cplx x = X_of_u(cd, u), y = Y_of_u(cd, u);
    const cplx x2 = x * x, y2 = y * y, x3 = x2 * x, y3 = y2 * y;
    const std::array<cplx, 10> terms = {
        sc.fixed[0] * x2 * x2, sc.fixed[1] * y2 * y2, sc.fixed[2] * x3 * y3, sc.fixed[3] * x3 * y,
        sc.fixed[4] * y3 * x,  sc.fixed[5] * x2 * y2, sc.s2q * x2,           sc.s2qi * y2,
        s1_factor * sc.s1 * x * y, cplx(sc.s0)};
    cplx sum = 0;
    double mx = 0;
    for (const cplx& v : terms) {
        sum += v;
        mx = std::max(mx, std::abs(v));
    }
    return mx == 0 ? 0.0 : std::abs(sum) / mx;
}

double lensing_q1(const ABCPoint& p) {
    const double a = p.a, b = p.b;
    const double a4 = std::pow(a, 4), b4 = std::pow(b, 4);
    const double A = scale_A(p.a, p.b, p.c);
    return 2 * (a4 - b4) * (a4 - 1) * (1 - a4 * b4) / (std::sqrt(a) * std::pow(A, 1.5) * std::pow(a * a - b * b, 1.5));
}

double lensing_q1_tilde(const ABCPoint& p) {
    const double a = p.a, b = p.b;
    const double a4 = std::pow(a, 4), b4 = std::pow(b, 4);
    const double A = scale_A(p.a, p.b, p.c);
    return 2 * (a4 - b4) * (1 - b4) * (1 - a4 * b4) / (std::sqrt(b) * std::pow(A, 1.5) * std::pow(a * a - b * b, 1.5));
}

LensingCertificate lensing_certificate(const ABCPoint& p, int n_theta) {
    if (!in_region(p)) throw DomainError("(a,b,c) outside the region R");
    LensingCertificate cert;
    const double a = p.a, b = p.b, c = p.c;
    constexpr double eps = 1e-12;
    double margin = std::numeric_limits<double>::infinity();
    auto fail = [&](double th, const std::string& what) {
        if (!cert.pass) return;
        cert.pass = false;
        cert.witness_theta = th;
        std::ostringstream os;
        os.precision(17);
        os << "(" << th << ", " << what << ")";
        cert.witness = os.str();
    };
    auto need = [&](double th, double slack, const char* what) {
        margin = std::min(margin, slack);
        if (slack < -eps) fail(th, what);
    };
    // sin^2 theta = (3/4)(1 - 1/b^2 - 1/a^2 + 1/(a^2 b^2)) must have no solution
    const double lhs12 = 0.75 * (1 - 1 / (b * b) - 1 / (a * a) + 1 / (a * a * b * b));
    if (!(lhs12 <= eps || lhs12 > 1)) fail(0.0, "r^2 = 1 solvable");
    const double lhs3 = 0.75 * (1 - 1 / (a * a * b * b));
    for (int k = 1; k < n_theta; ++k) {
        const double th = kPi * k / n_theta;
        const double rpb = r_plus(th, a, b), rpc = r_plus(th, a, c);
        need(th, rpb - a, "(i) r+(a,b) >= a");
        need(th, a - 1, "(i) a >= 1");
        need(th, rpb - rpc, "(iii) r+(a,b) >= r+(a,c)");
        const double s = std::sin(th);
        if (s * s < 0.75) {
            const double rmb = r_minus(th, a, b), rmc = r_minus(th, a, c);
            need(th, b - rmb, "(ii) r-(a,b) <= b");
            need(th, 1 - b, "(ii) b <= 1");
            need(th, rmb - rmc, "(iv) r-(a,b) >= r-(a,c)");
            if (!(lhs3 < s * s)) fail(th, "r+ r- < 1");
            need(th, 1 - rpb * rmb, "r+ r- <= 1");
        }
    }
    const bool interior = in_region_interior(p);
    if (std::abs(a - b) > 1e-12) {
        cert.q1 = lensing_q1(p);
        cert.q1_tilde = lensing_q1_tilde(p);
        if (interior ? !(cert.q1 > 0) : cert.q1 < -eps) fail(0.0, "q1 > 0");
        if (interior ? !(cert.q1_tilde > 0) : cert.q1_tilde < -eps) fail(0.0, "q1~ > 0");
    } else {
        cert.q1 = cert.q1_tilde = 0;
    }
    cert.min_margin = margin;
    return cert;
}

LensingCertificate check_lensing(const ABCPoint& p, int n_theta) {
    LensingCertificate cert = lensing_certificate(p, n_theta);
    if (!cert.pass) throw CertificateFailure("lensing inequality violated at " + cert.witness);
    return cert;
}

}  // namespace ising2mm
