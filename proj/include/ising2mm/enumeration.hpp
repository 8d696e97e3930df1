#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "ising2mm/series.hpp"

namespace ising2mm {

struct Covariance {
    double xx = 0;
    double yy = 0;
    double xy = 0;
};

Covariance gaussian_covariance(double tau, int n);

struct Diagram {
    int V = 0;
    std::vector<bool> is_x;      // per vertex
    std::vector<int> matching;   // involution on 4V half-edges, half-edge 4v+i
    int F = 0;
    int E = 0;
    int chi = 0;
    int D = 0;  // edges joining an X vertex to a Y vertex
    int U = 0;
    int S = 0;
    int components = 0;
    int n_x() const;
};

struct EnumerationOptions {
    int cap = 3;
    int threads = 0;  // 0: ISING2MM_THREADS or hardware concurrency
};

// Calls visit for every (coloring, matching) pair.
void enumerate_diagrams(int V, const std::function<void(const Diagram&)>& visit, const EnumerationOptions& opt = {});

// Number of diagrams with a given (F, D, #X vertices) at fixed V.
struct DiagramCounts {
    int V = 0;
    std::map<std::tuple<int, int, int>, std::int64_t> counts;
};

DiagramCounts count_diagrams(int V, const EnumerationOptions& opt = {});

// Finitely supported polynomial in n and 1/n.
template <class T>
using LaurentPoly = std::map<int, T>;

template <class T>
LaurentPoly<T> laurent_mul(const LaurentPoly<T>& a, const LaurentPoly<T>& b) {
    LaurentPoly<T> r;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b) r[i + j] += x * y;
    return r;
}

template <class T>
struct WickSeries {
    // index V: coefficient of t^V in Z/Z0 and in log(Z/Z0), graded by the power of n
    std::vector<LaurentPoly<T>> z;
    std::vector<LaurentPoly<T>> log_z;
    // n^2 part of log(Z/Z0), i.e. the planar free energy coefficients
    std::vector<T> genus0;
};

// q = e^H enters only through integer powers, so exact rational weights are available.
template <class T>
WickSeries<T> wick_series_from_counts(const std::vector<DiagramCounts>& counts, const T& tau, const T& q) {
    const int vmax = int(counts.size());
    WickSeries<T> out;
    out.z.assign(vmax + 1, {});
    out.log_z.assign(vmax + 1, {});
    out.genus0.assign(vmax + 1, T(0));
    const T prop = T(1) / (T(1) - tau * tau);
    T fact(1);
    for (int V = 1; V <= vmax; ++V) {
        fact *= T(V);
        const DiagramCounts& dc = counts[V - 1];
        T pref = T(1) / fact;
        for (int k = 0; k < V; ++k) pref /= T(-4);
        for (int k = 0; k < 2 * V; ++k) pref *= prop;
        LaurentPoly<T>& zv = out.z[V];
        for (const auto& [key, cnt] : dc.counts) {
            const auto [F, D, nx] = key;
            T w = pref * T(static_cast<long long>(cnt));
            for (int k = 0; k < D; ++k) w *= tau;
            const int qpow = nx - (V - nx);
            for (int k = 0; k < std::abs(qpow); ++k) {
                if (qpow > 0) w *= q; else w /= q;
            }
            zv[V - 2 * V + F] += w;
        }
    }
    // log of 1 + sum z_V t^V: L_V = z_V - (1/V) sum_{k<V} k L_k z_{V-k}
    for (int V = 1; V <= vmax; ++V) {
        LaurentPoly<T> acc = out.z[V];
        for (int k = 1; k < V; ++k) {
            const LaurentPoly<T> prod = laurent_mul(out.log_z[k], out.z[V - k]);
            for (const auto& [e, x] : prod) acc[e] -= x * T(k) / T(V);
        }
        for (auto it = acc.begin(); it != acc.end();) {
            if (it->second == T(0)) it = acc.erase(it); else ++it;
        }
        out.log_z[V] = acc;
        const auto it = acc.find(2);
        out.genus0[V] = it == acc.end() ? T(0) : it->second;
    }
    return out;
}

WickSeries<double> wick_free_energy_series(double tau, double h, int vmax, const EnumerationOptions& opt = {});
WickSeries<Rational> wick_free_energy_series_exact(const Rational& tau, const Rational& q, int vmax,
                                                   const EnumerationOptions& opt = {});

struct IsingGraph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;  // loops allowed
};

// Exact spin sum of exp(beta sum_edges s_x s_y + beta h sum_x s_x); a loop contributes +1.
double ising_partition_graph(const IsingGraph& g, double beta, double hfield);

}  // namespace ising2mm
