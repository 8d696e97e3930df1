#include "ising2mm/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "ising2mm/errors.hpp"

namespace ising2mm {

Covariance gaussian_covariance(double tau, int n) {
    if (!(tau >= 0 && tau < 1)) throw DomainError("tau must lie in [0,1)");
    if (n <= 0) throw DomainError("n must be positive");
    const double base = 1.0 / (n * (1 - tau * tau));
    return {base, base, tau * base};
}

int Diagram::n_x() const { return int(std::count(is_x.begin(), is_x.end(), true)); }

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ISING2MM_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void check_cap(int V, const EnumerationOptions& opt) {
    if (V < 1) throw DomainError("V must be at least 1");
    if (V > opt.cap) throw CapExceeded("vertex count above the enumeration cap");
}

// faces = cycles of matching o rotation, rotation (v,i) -> (v,i+1 mod 4)
int count_faces(const std::vector<int>& m) {
    const int n = int(m.size());
    std::vector<char> seen(n, 0);
    int faces = 0;
    for (int h = 0; h < n; ++h) {
        if (seen[h]) continue;
        ++faces;
        int x = h;
        while (!seen[x]) {
            seen[x] = 1;
            const int rot = (x & ~3) | ((x + 1) & 3);
            x = m[rot];
        }
    }
    return faces;
}

int count_components(const std::vector<int>& m, int V) {
    std::vector<int> parent(V);
    for (int v = 0; v < V; ++v) parent[v] = v;
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (int h = 0; h < int(m.size()); ++h) parent[find(h / 4)] = find(m[h] / 4);
    int c = 0;
    for (int v = 0; v < V; ++v) c += find(v) == v;
    return c;
}

// all perfect matchings with half-edge 0 paired to `first`
template <class Fn>
void matchings_with_first(int n, int first, Fn&& fn) {
    std::vector<int> m(n, -1);
    m[0] = first;
    m[first] = 0;
    auto rec = [&](auto&& self) -> void {
        int i = 0;
        while (i < n && m[i] >= 0) ++i;
        if (i == n) {
            fn(m);
            return;
        }
        for (int j = i + 1; j < n; ++j) {
            if (m[j] >= 0) continue;
            m[i] = j;
            m[j] = i;
            self(self);
            m[i] = m[j] = -1;
        }
    };
    rec(rec);
}

}  // namespace

void enumerate_diagrams(int V, const std::function<void(const Diagram&)>& visit, const EnumerationOptions& opt) {
    check_cap(V, opt);
    const int n = 4 * V;
    Diagram d;
    d.V = V;
    d.E = 2 * V;
    for (int first = 1; first < n; ++first) {
        matchings_with_first(n, first, [&](const std::vector<int>& m) {
            d.matching = m;
            d.F = count_faces(m);
            d.chi = V - d.E + d.F;
            d.components = count_components(m, V);
            for (int mask = 0; mask < (1 << V); ++mask) {
                d.is_x.assign(V, false);
                for (int v = 0; v < V; ++v) d.is_x[v] = (mask >> v) & 1;
                int D = 0;
                for (int h = 0; h < n; ++h)
                    if (h < m[h] && d.is_x[h / 4] != d.is_x[m[h] / 4]) ++D;
                d.D = D;
                d.U = d.E - D;
                d.S = d.D - d.U;
                visit(d);
            }
        });
    }
}

DiagramCounts count_diagrams(int V, const EnumerationOptions& opt) {
    check_cap(V, opt);
    const int n = 4 * V;
    const int nthreads = std::min(resolve_threads(opt.threads), n - 1);
    // one partial table per choice of partner for half-edge 0, merged in a fixed order
    std::vector<std::map<std::tuple<int, int, int>, std::int64_t>> partial(n);
    auto work = [&](int first) {
        auto& tab = partial[first];
        std::vector<int> edge_a, edge_b;
        matchings_with_first(n, first, [&](const std::vector<int>& m) {
            const int F = count_faces(m);
            edge_a.clear();
            edge_b.clear();
            for (int h = 0; h < n; ++h)
                if (h < m[h]) {
                    edge_a.push_back(h / 4);
                    edge_b.push_back(m[h] / 4);
                }
            for (int mask = 0; mask < (1 << V); ++mask) {
                int D = 0;
                for (std::size_t e = 0; e < edge_a.size(); ++e) D += ((mask >> edge_a[e]) ^ (mask >> edge_b[e])) & 1;
                tab[{F, D, __builtin_popcount(unsigned(mask))}] += 1;
            }
        });
    };
    if (nthreads <= 1) {
        for (int first = 1; first < n; ++first) work(first);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nthreads; ++w) {
            pool.emplace_back([&, w] {
                for (int first = 1 + w; first < n; first += nthreads) work(first);
            });
        }
        for (auto& th : pool) th.join();
    }
    DiagramCounts dc;
    dc.V = V;
    for (int first = 1; first < n; ++first)
        for (const auto& [k, v] : partial[first]) dc.counts[k] += v;
    return dc;
}

namespace {
std::vector<DiagramCounts> all_counts(int vmax, const EnumerationOptions& opt) {
    std::vector<DiagramCounts> counts;
    for (int V = 1; V <= vmax; ++V) counts.push_back(count_diagrams(V, opt));
    return counts;
}
}  // namespace

WickSeries<double> wick_free_energy_series(double tau, double h, int vmax, const EnumerationOptions& opt) {
    if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
    return wick_series_from_counts<double>(all_counts(vmax, opt), tau, std::exp(h));
}

WickSeries<Rational> wick_free_energy_series_exact(const Rational& tau, const Rational& q, int vmax,
                                                   const EnumerationOptions& opt) {
    if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
    if (!(q > 0)) throw DomainError("q must be positive");
    return wick_series_from_counts<Rational>(all_counts(vmax, opt), tau, q);
}

double ising_partition_graph(const IsingGraph& g, double beta, double hfield) {
    if (g.vertices < 0) throw DomainError("negative vertex count");
    if (g.vertices > 24) throw CapExceeded("spin sum limited to 24 vertices");
    for (const auto& [x, y] : g.edges)
        if (x < 0 || y < 0 || x >= g.vertices || y >= g.vertices) throw DomainError("edge endpoint out of range");
    double Z = 0;
    const std::uint32_t states = 1u << g.vertices;
    for (std::uint32_t mask = 0; mask < states; ++mask) {
        auto spin = [&](int v) { return ((mask >> v) & 1) ? 1 : -1; };
        int bond = 0, mag = 0;
        for (const auto& [x, y] : g.edges) bond += spin(x) * spin(y);
        for (int v = 0; v < g.vertices; ++v) mag += spin(v);
        Z += std::exp(beta * bond + beta * hfield * mag);
    }
    return Z;
}

}  // namespace ising2mm
