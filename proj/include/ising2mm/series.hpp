#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <type_traits>
#include <vector>

#include "ising2mm/errors.hpp"

namespace ising2mm {

using Real50 = boost::multiprecision::cpp_bin_float_50;
using Rational = boost::multiprecision::cpp_rational;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

namespace detail {

template <class T>
T scalar_log(const T& x) {
    if constexpr (is_exact_v<T>) {
        if (x != 1) throw DomainError("exact series log needs constant term 1");
        return T(0);
    } else {
        using std::log;
        return log(x);
    }
}

template <class T>
T scalar_exp(const T& x) {
    if constexpr (is_exact_v<T>) {
        if (x != 0) throw DomainError("exact series exp needs constant term 0");
        return T(1);
    } else {
        using std::exp;
        return exp(x);
    }
}

}  // namespace detail

// Power series c_0 + c_1 t + ... + c_N t^N; every operation truncates at N.
template <class T>
class TruncatedSeries {
public:
    TruncatedSeries() : c_(1, T(0)) {}
    explicit TruncatedSeries(std::size_t order) : c_(order + 1, T(0)) {}
    TruncatedSeries(std::size_t order, std::initializer_list<T> init) : c_(order + 1, T(0)) {
        std::size_t k = 0;
        for (const T& v : init) {
            if (k > order) break;
            c_[k++] = v;
        }
    }
    TruncatedSeries(std::vector<T> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(T(0));
    }

    static TruncatedSeries constant(std::size_t order, const T& v) {
        TruncatedSeries s(order);
        s.c_[0] = v;
        return s;
    }
    static TruncatedSeries variable(std::size_t order) {
        TruncatedSeries s(order);
        if (order >= 1) s.c_[1] = T(1);
        return s;
    }

    std::size_t order() const { return c_.size() - 1; }
    const T& operator[](std::size_t k) const { return c_[k]; }
    T& operator[](std::size_t k) { return c_[k]; }
    const std::vector<T>& coeffs() const { return c_; }

    T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }

    TruncatedSeries truncated(std::size_t order) const {
        TruncatedSeries s(order);
        for (std::size_t k = 0; k <= order && k < c_.size(); ++k) s.c_[k] = c_[k];
        return s;
    }

    T eval(const T& x) const {
        T acc(0);
        for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
        return acc;
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        for (std::size_t k = 0; k < c_.size() && k < o.c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        for (std::size_t k = 0; k < c_.size() && k < o.c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    TruncatedSeries& operator*=(const T& s) {
        for (auto& v : c_) v *= s;
        return *this;
    }

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(TruncatedSeries a, const T& s) { return a *= s; }
    friend TruncatedSeries operator*(const T& s, TruncatedSeries a) { return a *= s; }
    TruncatedSeries operator-() const {
        TruncatedSeries r = *this;
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return mul(a, b); }
    friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) { return div(a, b); }

    static TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
        const std::size_t n = std::min(a.order(), b.order());
        TruncatedSeries r(n);
        for (std::size_t i = 0; i <= n; ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; i + j <= n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }

    TruncatedSeries inv() const {
        if (c_[0] == 0) throw DomainError("series inverse needs a nonzero constant term");
        const std::size_t n = order();
        TruncatedSeries r(n);
        const T a0inv = T(1) / c_[0];
        r.c_[0] = a0inv;
        for (std::size_t k = 1; k <= n; ++k) {
            T acc(0);
            for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
            r.c_[k] = -acc * a0inv;
        }
        return r;
    }

    static TruncatedSeries div(const TruncatedSeries& a, const TruncatedSeries& b) { return mul(a, b.inv()); }

    TruncatedSeries derivative() const {
        TruncatedSeries r(order());
        for (std::size_t k = 1; k < c_.size(); ++k) r.c_[k - 1] = c_[k] * T(static_cast<long>(k));
        return r;
    }

    // Antiderivative with zero constant; the top coefficient drops out of range.
    TruncatedSeries integral() const {
        TruncatedSeries r(order());
        for (std::size_t k = 0; k + 1 < c_.size(); ++k) r.c_[k + 1] = c_[k] / T(static_cast<long>(k + 1));
        return r;
    }

    TruncatedSeries log() const {
        const T& s0 = c_[0];
        if constexpr (!is_exact_v<T>) {
            if (!(s0 > 0)) throw DomainError("series log needs a positive constant term");
        }
        const std::size_t n = order();
        TruncatedSeries r(n);
        r.c_[0] = detail::scalar_log(s0);
        for (std::size_t k = 1; k <= n; ++k) {
            T acc = T(static_cast<long>(k)) * c_[k];
            for (std::size_t j = 1; j < k; ++j) acc -= T(static_cast<long>(j)) * r.c_[j] * c_[k - j];
            r.c_[k] = acc / (T(static_cast<long>(k)) * s0);
        }
        return r;
    }

    TruncatedSeries exp() const {
        const std::size_t n = order();
        TruncatedSeries r(n);
        r.c_[0] = detail::scalar_exp(c_[0]);
        for (std::size_t k = 1; k <= n; ++k) {
            T acc(0);
            for (std::size_t j = 1; j <= k; ++j) acc += T(static_cast<long>(j)) * c_[j] * r.c_[k - j];
            r.c_[k] = acc / T(static_cast<long>(k));
        }
        return r;
    }

    TruncatedSeries pow(unsigned long k) const {
        TruncatedSeries result = constant(order(), T(1));
        TruncatedSeries base = *this;
        while (k) {
            if (k & 1) result = mul(result, base);
            k >>= 1;
            if (k) base = mul(base, base);
        }
        return result;
    }

    TruncatedSeries pow_real(const T& e) const {
        static_assert(!is_exact_v<T>, "real powers need a floating scalar");
        return (log() * e).exp();
    }

    // f(g(t)) by Horner; g must have zero constant term.
    static TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g) {
        if (g.c_[0] != 0) throw DomainError("compose needs g(0) = 0");
        const std::size_t n = std::min(f.order(), g.order());
        TruncatedSeries acc(n);
        for (std::size_t k = f.c_.size(); k-- > 0;) {
            acc = mul(acc, g.truncated(n));
            acc.c_[0] += f.c_[k];
        }
        return acc;
    }

    // Compositional inverse; Newton iteration doubling the number of correct terms.
    TruncatedSeries revert() const {
        if (c_[0] != 0) throw SingularReversion("reversion needs a zero constant term");
        if (order() < 1 || c_[1] == 0) throw SingularReversion("reversion needs a nonzero linear term");
        const std::size_t n = order();
        TruncatedSeries f(n);
        f.c_[1] = T(1) / c_[1];
        const TruncatedSeries dg = derivative();
        std::size_t good = 1;
        while (good < n) {
            good = std::min(n, 2 * good + 1);
            TruncatedSeries gf = compose(*this, f);
            gf.c_[1] -= T(1);
            const TruncatedSeries dgf = compose(dg, f);
            f -= div(gf, dgf);
        }
        return f;
    }

private:
    std::vector<T> c_;
};

// G(s) = I(s; tau, 0, q) expanded at s = 0, with C = cosh H.
template <class T>
TruncatedSeries<T> sigma_equation_series(const T& tau, const T& C, std::size_t order) {
    TruncatedSeries<T> g(order);
    const T tau2 = tau * tau;
    if (order >= 1) g[1] += tau2 / 3;
    if (order >= 3) g[3] -= tau2 / 9;
    // -s/(3(1+s)^2) = -(1/3) sum (-1)^k (k+1) s^{k+1}
    for (std::size_t k = 0; k + 1 <= order; ++k) {
        T term = T(static_cast<long>(k + 1)) / 3;
        g[k + 1] += (k % 2 == 0) ? -term : term;
    }
    // (2/3)(C-1) s^2/(1-s^2)^2 = (2/3)(C-1) sum (k+1) s^{2k+2}
    if (C != 1) {
        for (std::size_t k = 0; 2 * k + 2 <= order; ++k) g[2 * k + 2] += T(2) * (C - 1) * T(static_cast<long>(k + 1)) / 3;
    }
    return g;
}

template <class T>
struct SigmaCoefficients {
    // sigma_V with sigma(t) = sum sigma_V t^V / V!, index 0 unused (sigma_0 = 0)
    std::vector<T> by_reversion;
    std::vector<T> by_lagrange;
    // [t^V] sigma = sigma_V / V!
    std::vector<T> taylor;
};

template <class T>
SigmaCoefficients<T> lagrange_sigma_coeffs_t(const T& tau, const T& C, std::size_t order) {
    if (order < 1) throw DomainError("order must be at least 1");
    const TruncatedSeries<T> g = sigma_equation_series(tau, C, order + 1);
    SigmaCoefficients<T> out;
    const TruncatedSeries<T> sig = g.truncated(order).revert();
    out.taylor.assign(order + 1, T(0));
    out.by_reversion.assign(order + 1, T(0));
    out.by_lagrange.assign(order + 1, T(0));
    T fact(1);
    for (std::size_t v = 1; v <= order; ++v) {
        fact *= T(static_cast<long>(v));
        out.taylor[v] = sig[v];
        out.by_reversion[v] = sig[v] * fact;
    }
    // (s / G(s)) as a series: G(s)/s has constant term G'(0).
    TruncatedSeries<T> g_over_s(order);
    for (std::size_t k = 0; k <= order; ++k) g_over_s[k] = g[k + 1];
    const TruncatedSeries<T> phi = g_over_s.inv();
    TruncatedSeries<T> pw = TruncatedSeries<T>::constant(order, T(1));
    T fm1(1);  // (V-1)!
    for (std::size_t v = 1; v <= order; ++v) {
        pw = TruncatedSeries<T>::mul(pw, phi);
        if (v > 1) fm1 *= T(static_cast<long>(v - 1));
        out.by_lagrange[v] = pw[v - 1] * fm1;
    }
    return out;
}

// Double-precision front end; H is converted to C = cosh H.
SigmaCoefficients<double> lagrange_sigma_coeffs(double tau, double h, std::size_t order);
SigmaCoefficients<Real50> lagrange_sigma_coeffs_hp(double tau, double h, std::size_t order);

}  // namespace ising2mm
