#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <queue>
#include <vector>

#include "ising2mm/errors.hpp"

namespace ising2mm {

struct QuadResult {
    double value;
    double error;
};

// Globally adaptive bisection driven by the 15-point Gauss-Kronrod rule.
// tol is absolute; the error estimate is the sum of |K15 - G7| over the final panels.
template <class F>
QuadResult integrate_gk15(F&& f, double lo, double hi, double tol = 1e-11, int max_panels = 4000) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    struct Panel {
        double a, b, v, e;
        bool operator<(const Panel& o) const { return e < o.e; }
    };
    auto eval = [&](double a, double b) {
        double e = 0;
        const double v = GK::integrate(f, a, b, 0, 0.0, &e);
        // boost leaves the single-panel error in reference coordinates
        return Panel{a, b, v, e * (b - a) / 2};
    };
    std::priority_queue<Panel> q;
    Panel first = eval(lo, hi);
    double total = first.v, err = first.e;
    q.push(first);
    int panels = 1;
    while (err > tol && panels < max_panels) {
        const Panel p = q.top();
        q.pop();
        const double mid = 0.5 * (p.a + p.b);
        const Panel l = eval(p.a, mid), r = eval(mid, p.b);
        total += l.v + r.v - p.v;
        err += l.e + r.e - p.e;
        q.push(l);
        q.push(r);
        ++panels;
        if (!std::isfinite(total)) throw QuadratureFailure("non-finite integrand value");
    }
    // re-sum the panels so rounding in the running totals does not accumulate
    double v = 0, e = 0;
    while (!q.empty()) {
        v += q.top().v;
        e += q.top().e;
        q.pop();
    }
    if (e > tol) throw QuadratureFailure("quadrature error estimate above tolerance");
    return {v, e};
}

}  // namespace ising2mm
