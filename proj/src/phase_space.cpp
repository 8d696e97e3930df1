#include "ising2mm/phase_space.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

#include "ising2mm/errors.hpp"

namespace ising2mm {

namespace {

constexpr double kTauMulti = 0.25;
constexpr double kTMulti = -5.0 / 72.0;

struct Monomial {
    int cpow, tpow, taupow;
    double coef;
};

// Discriminant of the sextic in (tau, t, C), expanded; 59 terms.
const Monomial kJ[] = {
    {0, 0, 2, 20736.0},
    {0, 0, 4, 546048.0},
    {0, 0, 6, 2624256.0},
    {0, 0, 8, -12437760.0},
    {0, 0, 10, 15861760.0},
    {0, 0, 12, -7827456.0},
    {0, 0, 14, 1277952.0},
    {0, 0, 16, -65536.0},
    {0, 2, 2, 6601824.0},
    {0, 2, 4, 42729120.0},
    {0, 2, 6, 806993280.0},
    {0, 2, 8, -21772800.0},
    {0, 2, 10, -29859840.0},
    {0, 2, 12, 5308416.0},
    {0, 4, 0, -531441.0},
    {0, 4, 2, 583036704.0},
    {0, 4, 4, -5048925696.0},
    {0, 4, 6, -362797056.0},
    {0, 4, 8, -161243136.0},
    {0, 6, 0, -153055008.0},
    {0, 6, 2, 8979227136.0},
    {0, 6, 4, 2176782336.0},
    {0, 8, 0, -11019960576.0},
    {1, 1, 2, 1275264.0},
    {1, 1, 4, -1451520.0},
    {1, 1, 6, 147277440.0},
    {1, 1, 8, -197475840.0},
    {1, 1, 10, 60549120.0},
    {1, 1, 12, -10174464.0},
    {1, 3, 2, 249930360.0},
    {1, 3, 4, -2979218880.0},
    {1, 3, 6, 2205895680.0},
    {1, 3, 8, 403107840.0},
    {1, 5, 0, -25509168.0},
    {1, 5, 2, 8865853056.0},
    {1, 5, 4, -3809369088.0},
    {1, 7, 0, -3673320192.0},
    {2, 0, 4, -2160000.0},
    {2, 0, 6, 1440000.0},
    {2, 0, 8, 7440000.0},
    {2, 0, 10, -10560000.0},
    {2, 0, 12, 3840000.0},
    {2, 2, 2, 25223400.0},
    {2, 2, 4, -666646200.0},
    {2, 2, 6, -235612800.0},
    {2, 2, 8, -423014400.0},
    {2, 4, 2, 2173003200.0},
    {2, 4, 4, -1700611200.0},
    {2, 6, 0, -306110016.0},
    {3, 1, 4, -43740000.0},
    {3, 1, 6, -98820000.0},
    {3, 1, 8, 113760000.0},
    {3, 3, 2, 157464000.0},
    {3, 3, 4, 1008936000.0},
    {4, 0, 4, 1350000.0},
    {4, 0, 6, -2700000.0},
    {4, 0, 8, 1350000.0},
    {4, 2, 4, 388800000.0},
    {5, 1, 4, 32400000.0},
};

bool pole_guard(double x) {
    return std::abs(x) < 64 * std::numeric_limits<double>::epsilon();
}

}  // namespace

bool in_region(const ABCPoint& p, double slack) {
    return p.b > 0 && p.b <= 1 + slack && p.a >= 1 - slack && p.a * p.b <= 1 + slack && p.c > 0 &&
           p.c <= p.b + slack;
}

bool in_region_interior(const ABCPoint& p) {
    return p.b > 0 && p.b < 1 && p.a > 1 && p.a * p.b < 1 && p.c > 0 && p.c < p.b;
}

PhasePoint phase_from_q(double tau, double t, double q) {
    if (!(q > 0)) throw DomainError("q must be positive");
    return {tau, t, std::log(q)};
}

std::string to_string(RegionLabel r) {
    switch (r) {
        case RegionLabel::GenusZeroInterior: return "GenusZeroInterior";
        case RegionLabel::LowTempSurface: return "LowTempSurface";
        case RegionLabel::HighTempSurface: return "HighTempSurface";
        case RegionLabel::GammaB: return "GammaB";
        case RegionLabel::Multicritical: return "Multicritical";
        case RegionLabel::Outside: return "Outside";
        case RegionLabel::BoundaryT0: return "Boundary(t=0)";
        case RegionLabel::BoundaryTau0: return "Boundary(tau=0)";
        case RegionLabel::BoundaryTau1: return "Boundary(tau=1)";
        case RegionLabel::BoundaryQWall: return "Boundary(q-wall)";
    }
    return "?";
}

PhasePoint map_abc(const ABCPoint& p, bool strict) {
    if (strict && !in_region(p)) throw DomainError("(a,b,c) outside the region R");
    const double a2 = p.a * p.a, b2 = p.b * p.b, c2 = p.c * p.c, a4 = a2 * a2;
    const double P = a4 * c2 + a2 * b2 * c2 + a2 + c2;
    const double Q = a4 * b2 + a2 * b2 * c2 + a2 + b2;
    const double K = a4 * b2 * c2 + 3 * a4 + 3 * a2 * b2 + 3 * a2 * c2 + 3 * b2 * c2 - 3;
    PhasePoint out;
    out.tau = 1.0 / std::sqrt(P * Q);
    out.t = -a2 * p.b * p.c * K / (9 * P * Q);
    out.h = std::log(p.c * Q / (p.b * P));
    return out;
}

double scale_A(double a, double b, double c) {
    const double a2 = a * a, b2 = b * b, c2 = c * c, a4 = a2 * a2;
    const double P = a4 * c2 + a2 * b2 * c2 + a2 + c2;
    const double K = a4 * b2 * c2 + 3 * a4 + 3 * a2 * b2 + 3 * a2 * c2 + 3 * b2 * c2 - 3;
    return std::sqrt(3 * P / K);
}

double jacobian_abc(const ABCPoint& p) {
    const double a = p.a, b = p.b, c = p.c;
    const double a2 = a * a, b2 = b * b, c2 = c * c;
    const double num = 4 * a * c * (a2 - 1) * (a2 + 1) * (a2 * b2 - 1) * (a2 * c2 - 1) * (b2 * c2 - 1) *
                       (a2 - b2) * (a2 - c2);
    const double Q = a2 * b2 * c2 + a2 * a2 * b2 + a2 + b2;
    const double P = a2 * b2 * c2 + a2 * a2 * c2 + a2 + c2;
    return -num / (3 * b * std::pow(Q, 1.5) * std::pow(P, 3.5));
}

double G_eval(double s, double tau, double C) {
    if (pole_guard(1 + s)) throw PoleError("sigma = -1 is a pole");
    double val = -(tau * tau / 9) * s * (s * s - 3) - s / (3 * (1 + s) * (1 + s));
    if (C != 1.0) {
        if (pole_guard(1 - s)) throw PoleError("sigma = 1 is a pole when H != 0");
        const double r = s / ((1 - s) * (1 + s));
        val += (2.0 / 3) * r * r * (C - 1);
    }
    return val;
}

double G_dsigma(double s, double tau, double C) {
    if (pole_guard(1 + s)) throw PoleError("sigma = -1 is a pole");
    double val = -(tau * tau / 3) * (s * s - 1) - (1 - s) / (3 * std::pow(1 + s, 3));
    if (C != 1.0) {
        if (pole_guard(1 - s)) throw PoleError("sigma = 1 is a pole when H != 0");
        const double d = (1 - s) * (1 + s);
        val += (4.0 / 3) * s * (1 + s * s) / (d * d * d) * (C - 1);
    }
    return val;
}

double G_d2sigma(double s, double tau, double C) {
    if (pole_guard(1 + s)) throw PoleError("sigma = -1 is a pole");
    double val = -(2 * tau * tau / 3) * s + (4 - 2 * s) / (3 * std::pow(1 + s, 4));
    if (C != 1.0) {
        if (pole_guard(1 - s)) throw PoleError("sigma = 1 is a pole when H != 0");
        const double d = (1 - s) * (1 + s);
        const double s2 = s * s;
        val += (4.0 / 3) * (1 + 8 * s2 + 3 * s2 * s2) / (d * d * d * d) * (C - 1);
    }
    return val;
}

double I_eval(double sigma, const PhasePoint& pp) {
    return G_eval(sigma, pp.tau, std::cosh(pp.h)) - pp.t;
}

double I_dsigma(double sigma, const PhasePoint& pp) {
    return G_dsigma(sigma, pp.tau, std::cosh(pp.h));
}

double lambda_eval(double u, const PhasePoint& pp) {
    if (pp.t == 0) throw DomainError("lambda(u) needs t != 0");
    return G_eval(u, pp.tau, std::cosh(pp.h)) / pp.t;
}

double lambda_du(double u, const PhasePoint& pp) {
    if (pp.t == 0) throw DomainError("lambda(u) needs t != 0");
    return G_dsigma(u, pp.tau, std::cosh(pp.h)) / pp.t;
}

double t_low(double tau) { return -1.0 / 12 + (2.0 / 9) * tau * tau; }

double t_high(double tau) {
    const double r = std::sqrt(tau);
    return -(2.0 / 9) * r * (r - 1) * (r - 1) * (r + 2);
}

DoubleRoot critical_double_root(double tau, double h) {
    if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
    const double C = std::cosh(h);
    // G' < 0 near 0; the physical fold is the first sign change of G' on (0,1).
    std::vector<double> grid;
    for (int i = 1; i <= 400; ++i) grid.push_back(0.9 * i / 400.0);
    for (int j = 1; j <= 15 * 40; ++j) grid.push_back(1 - std::pow(10.0, -1 - j / 40.0));
    double lo = 0, hi = -1;
    for (size_t i = 0; i < grid.size(); ++i) {
        const double g = G_dsigma(grid[i], tau, C);
        if (g >= 0) {
            hi = grid[i];
            lo = i ? grid[i - 1] : 0.0;
            break;
        }
    }
    if (hi < 0) {
        if (C == 1.0) return {1.0, G_eval(1.0, tau, C)};
        throw NoConvergence("no fold of the sigma branch found on (0,1)");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (G_dsigma(mid, tau, C) < 0) lo = mid; else hi = mid;
    }
    double s = 0.5 * (lo + hi);
    // polish with Newton on G' = 0, staying inside the bracket
    for (int it = 0; it < 5; ++it) {
        const double d2 = G_d2sigma(s, tau, C);
        if (d2 == 0) break;
        const double ns = s - G_dsigma(s, tau, C) / d2;
        if (!(ns > lo - 1e-12 && ns < hi + 1e-12)) break;
        s = ns;
    }
    return {s, G_eval(s, tau, C)};
}

double t_critical(double tau, double h) {
    if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
    if (h == 0) return tau <= 0.25 ? t_low(tau) : t_high(tau);
    return critical_double_root(tau, h).t;
}

SigmaSolution solve_sigma(const PhasePoint& pp, const SigmaOptions& opt) {
    if (!(pp.tau > 0 && pp.tau < 1)) throw DomainError("tau must lie in (0,1)");
    SigmaSolution sol;
    if (pp.t == 0) {
        sol.sigma = 0;
        sol.converged = true;
        return sol;
    }
    const double tau = pp.tau, C = std::cosh(pp.h), target = pp.t;

    // For t < 0 the branch ends at the fold; locate it first so we can bracket.
    double fold_s = std::numeric_limits<double>::quiet_NaN();
    if (target < 0) {
        const DoubleRoot dr = critical_double_root(tau, pp.h);
        const double tcr = pp.h == 0 ? t_critical(tau, 0) : dr.t;
        if (target < tcr) {
            throw BranchPointReached("t lies beyond the critical coupling", tcr);
        }
        fold_s = dr.sigma;
    }

    double tc = 0, s = 0;
    double dt = target / opt.initial_divisions;
    const double dt_min = std::abs(target) * 1e-12;
    bool bracket_needed = false;
    while (tc != target) {
        double tn = tc + dt;
        if ((dt > 0 && tn > target) || (dt < 0 && tn < target)) tn = target;
        const double d0 = G_dsigma(s, tau, C);
        if (std::abs(d0) < opt.branch_threshold) {
            bracket_needed = true;
            break;
        }
        double sn = s + (tn - tc) / d0;
        int it = 0;
        bool ok = false;
        for (; it < opt.max_newton; ++it) {
            if (!(sn > -1 && (C == 1.0 || sn < 1))) break;
            const double r = G_eval(sn, tau, C) - tn;
            const double d = G_dsigma(sn, tau, C);
            if (d == 0) break;
            const double step = r / d;
            sn -= step;
            if (std::abs(step) <= opt.newton_tol * std::max(1.0, std::abs(sn)) &&
                std::abs(G_eval(sn, tau, C) - tn) <= opt.newton_tol * std::max(1.0, std::abs(tn))) {
                ok = true;
                break;
            }
        }
        // stay on the branch: sigma moves monotonically away from 0 with |t|
        if (ok && target < 0 && !(sn > s - 1e-14 && sn <= fold_s + 1e-12)) ok = false;
        if (!ok || it > opt.newton_halving_threshold) {
            if (ok && it > opt.newton_halving_threshold) {
                s = sn;
                tc = tn;
                sol.steps++;
            }
            dt *= 0.5;
            if (std::abs(dt) < dt_min) {
                bracket_needed = true;
                break;
            }
            continue;
        }
        s = sn;
        tc = tn;
        sol.steps++;
    }

    if (bracket_needed) {
        if (!(target < 0)) throw NoConvergence("sigma continuation stalled");
        // G is strictly decreasing on [s, fold_s]; bisect on G - t.
        sol.hit_branch_point = true;
        double lo = std::min(s, fold_s), hi = fold_s;
        if (G_eval(lo, tau, C) < target) lo = 0;
        for (int it = 0; it < 300 && hi - lo > 4e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (G_eval(mid, tau, C) > target) lo = mid; else hi = mid;
        }
        s = 0.5 * (lo + hi);
        sol.steps++;
    }
    sol.sigma = s;
    if (std::abs(G_dsigma(s, tau, C)) < opt.branch_threshold) sol.hit_branch_point = true;
    const double res = std::abs(G_eval(s, tau, C) - target);
    sol.converged = res <= 1e-11 * std::max(1.0, std::abs(target)) || sol.hit_branch_point;
    if (!sol.converged) throw NoConvergence("sigma residual above tolerance");
    return sol;
}

ABCPoint invert_phase_point(const PhasePoint& pp, double sigma) {
    // The region R maps to q <= 1, i.e. H <= 0.
    const double htarget = -std::abs(pp.h);
    auto resid = [&](const Eigen::Vector3d& x) {
        const PhasePoint m = map_abc({x[0], x[1], x[2]}, false);
        return Eigen::Vector3d(m.tau - pp.tau, m.h - htarget, x[0] * x[0] * x[1] * x[2] - sigma);
    };
    Eigen::Vector3d best(1, 0.5, 0.25);
    double best_norm = std::numeric_limits<double>::infinity();
    constexpr int n = 24;
    for (int ib = 1; ib <= n; ++ib) {
        const double b = double(ib) / n;
        for (int ia = 0; ia <= n; ++ia) {
            const double a = 1 + (1 / b - 1) * ia / n;
            for (int ic = 1; ic <= n; ++ic) {
                const double c = b * ic / n;
                const Eigen::Vector3d x(a, b, c);
                const double r = resid(x).norm();
                if (r < best_norm) {
                    best_norm = r;
                    best = x;
                }
            }
        }
    }
    Eigen::Vector3d x = best;
    Eigen::Vector3d r = resid(x);
    for (int it = 0; it < 100 && r.norm() > 1e-14; ++it) {
        Eigen::Matrix3d J;
        for (int k = 0; k < 3; ++k) {
            const double hstep = 1e-7 * std::max(1.0, std::abs(x[k]));
            Eigen::Vector3d xp = x, xm = x;
            xp[k] += hstep;
            xm[k] -= hstep;
            J.col(k) = (resid(xp) - resid(xm)) / (2 * hstep);
        }
        const Eigen::Vector3d dx = J.colPivHouseholderQr().solve(-r);
        double lam = 1;
        bool moved = false;
        for (int k = 0; k < 30; ++k) {
            const Eigen::Vector3d xn = x + lam * dx;
            if (xn[0] > 0 && xn[1] > 0 && xn[2] > 0) {
                const Eigen::Vector3d rn = resid(xn);
                if (rn.norm() < r.norm()) {
                    x = xn;
                    r = rn;
                    moved = true;
                    break;
                }
            }
            lam *= 0.5;
        }
        if (!moved) break;
    }
    if (r.norm() > 1e-9) throw NoConvergence("phase point inversion did not converge");
    return {x[0], x[1], x[2]};
}

RegionLabel classify(const PhasePoint& in, double tol) {
    if (!std::isfinite(in.tau) || !std::isfinite(in.t) || std::isnan(in.h)) return RegionLabel::Outside;
    if (in.tau < 0 || in.tau > 1) return RegionLabel::Outside;
    if (in.tau == 0) return RegionLabel::BoundaryTau0;
    if (in.tau == 1) return RegionLabel::BoundaryTau1;
    if (std::isinf(in.h)) return RegionLabel::BoundaryQWall;
    if (in.t == 0) return RegionLabel::BoundaryT0;
    if (in.t > 0) return RegionLabel::Outside;
    PhasePoint pp = in;
    pp.h = std::abs(in.h);

    if (std::abs(pp.tau - kTauMulti) <= tol * kTauMulti && std::abs(pp.t - kTMulti) <= tol * std::abs(kTMulti) &&
        pp.h <= tol)
        return RegionLabel::Multicritical;

    double tcr, fold_s;
    if (pp.h == 0) {
        tcr = t_critical(pp.tau, 0);
        fold_s = pp.tau <= 0.25 ? 1.0 : 1 / std::sqrt(pp.tau) - 1;
    } else {
        const DoubleRoot dr = critical_double_root(pp.tau, pp.h);
        tcr = dr.t;
        fold_s = dr.sigma;
    }
    if (std::abs(pp.t - tcr) <= tol * std::abs(tcr)) {
        if (pp.h == 0) return pp.tau < 0.25 ? RegionLabel::LowTempSurface : RegionLabel::HighTempSurface;
        const ABCPoint p = invert_phase_point({pp.tau, tcr, pp.h}, fold_s);
        const double dhigh = std::abs(p.a - 1), dlow = std::abs(p.a * p.b - 1);
        constexpr double band = 1e-6;
        if (dhigh < band && dlow < band) return RegionLabel::GammaB;
        return dlow < dhigh ? RegionLabel::LowTempSurface : RegionLabel::HighTempSurface;
    }
    return pp.t > tcr ? RegionLabel::GenusZeroInterior : RegionLabel::Outside;
}

PhasePoint critical_surface_low(double b, double c) {
    if (!(b > 0 && b < 1 && c > 0 && c < b)) throw DomainError("need 0 < c < b < 1");
    const double b2 = b * b, c2 = c * c, b4 = b2 * b2;
    const double N1 = 2 * b4 * c2 + b2 + c2;
    const double N2 = b4 + b2 * c2 + 2;
    PhasePoint out;
    out.tau = b * b2 / std::sqrt(N1 * N2);
    out.t = -b * c * (b4 * b2 * c2 + (4.0 / 3) * b2 * c2 + 1) / (3 * N1 * N2);
    out.h = std::log(b * c * N2 / N1);
    return out;
}

PhasePoint critical_surface_high(double b, double c) {
    if (!(b > 0 && b <= 1 && c > 0 && c < b)) throw DomainError("need 0 < c < b < 1");
    const double b2 = b * b, c2 = c * c;
    const double M1 = b2 * c2 + 2 * c2 + 1;
    const double M2 = b2 * c2 + 2 * b2 + 1;
    PhasePoint out;
    out.tau = 1 / std::sqrt(M1 * M2);
    out.t = -b * c * (4 * b2 * c2 + 3 * b2 + 3 * c2) / (9 * M1 * M2);
    out.h = std::log(c * M2 / (b * M1));
    return out;
}

PhasePoint critical_curve_b(double c) {
    if (!(c > 0 && c <= 1)) throw DomainError("need 0 < c <= 1");
    const double c2 = c * c;
    PhasePoint out;
    out.tau = 1 / std::sqrt((3 * c2 + 1) * (c2 + 3));
    out.t = -c * (7 * c2 + 3) / (9 * (c2 + 3) * (3 * c2 + 1));
    out.h = std::log(c * (c2 + 3) / (3 * c2 + 1));
    return out;
}

namespace {
std::pair<double, double> eval_J(double tau, double t, double C) {
    double val = 0, scale = 0;
    for (const Monomial& m : kJ) {
        const double x = m.coef * std::pow(tau, m.taupow) * std::pow(t, m.tpow) * std::pow(C, m.cpow);
        val += x;
        scale += std::abs(x);
    }
    return {val, scale};
}
}  // namespace

double discriminant_J(double tau, double t, double coshH) { return eval_J(tau, t, coshH).first; }

double discriminant_J_scaled(double tau, double t, double coshH) {
    const auto [v, s] = eval_J(tau, t, coshH);
    return s == 0 ? 0.0 : std::abs(v) / s;
}

}  // namespace ising2mm
