#include "ising2mm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

#include "ising2mm/asymptotics.hpp"
#include "ising2mm/checks.hpp"
#include "ising2mm/enumeration.hpp"
#include "ising2mm/errors.hpp"
#include "ising2mm/free_energy.hpp"
#include "ising2mm/phase_space.hpp"
#include "ising2mm/series.hpp"
#include "ising2mm/spectral_curve.hpp"

namespace ising2mm {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Emission {
    json record = json::object();  // top-level keys of the JSON document
    Table table;
    std::string default_format = "json";
    int exit_code = 0;
};

// Domain failure that knows where in phase space it happened.
struct RegionError : DomainError {
    RegionLabel region;
    RegionError(const std::string& what, RegionLabel r) : DomainError(what), region(r) {}
};

struct RunConfig {
    std::string command;
    std::string format;
    std::string out_path;
    std::string config_file;
    int threads = 0;
    std::uint64_t seed = 7;
    json params = json::object();
};

json cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<V, double>) return std::isfinite(v) ? json(v) : json(nullptr);
            else return json(v);
        },
        c);
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) return "";
            else if constexpr (std::is_same_v<V, double>) return format_double(v);
            else if constexpr (std::is_same_v<V, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<V, bool>) return v ? "true" : "false";
            else return v;
        },
        c);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char ch : s) {
        if (ch == '"') r += '"';
        r += ch;
    }
    return r + "\"";
}

json config_json(const RunConfig& rc) {
    json j;
    j["command"] = rc.command;
    j["format"] = rc.format;
    j["out"] = rc.out_path;
    j["config_file"] = rc.config_file;
    j["threads"] = rc.threads;
    j["seed"] = rc.seed;
    j["params"] = rc.params;
    return j;
}

// A record without a table prints as a one-row table in csv/table form.
Table as_table(const Emission& em) {
    if (!em.table.columns.empty()) return em.table;
    Table t;
    std::vector<Cell> row;
    for (const auto& [k, v] : em.record.items()) {
        t.columns.push_back(k);
        if (v.is_number_float()) row.emplace_back(v.get<double>());
        else if (v.is_number_integer()) row.emplace_back(v.get<long long>());
        else if (v.is_boolean()) row.emplace_back(v.get<bool>());
        else if (v.is_string()) row.emplace_back(v.get<std::string>());
        else if (v.is_null()) row.emplace_back(std::monostate{});
        else row.emplace_back(v.dump());
    }
    t.rows.push_back(std::move(row));
    return t;
}

void emit(const Emission& em, const RunConfig& rc, std::ostream& os) {
    if (rc.format == "json") {
        json doc;
        doc["schema"] = kSchema;
        for (const auto& [k, v] : em.record.items()) doc[k] = v;
        if (!em.table.columns.empty()) {
            json rows = json::array();
            for (const auto& r : em.table.rows) {
                json o;
                for (std::size_t i = 0; i < r.size(); ++i) o[em.table.columns[i]] = cell_json(r[i]);
                rows.push_back(std::move(o));
            }
            doc["columns"] = em.table.columns;
            doc["rows"] = std::move(rows);
        }
        doc["config"] = config_json(rc);
        os << doc.dump(2) << "\n";
        return;
    }
    const Table t = as_table(em);
    if (rc.format == "csv") {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
        os << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(r[i]));
            os << "\n";
        }
        return;
    }
    std::vector<std::size_t> w(t.columns.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = t.columns[i].size();
    for (const auto& r : t.rows)
        for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], cell_text(r[i]).size());
    auto line = [&](auto&& get) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            const std::string s = get(i);
            os << s << std::string(w[i] - s.size() + (i + 1 < w.size() ? 2 : 0), ' ');
        }
        os << "\n";
    };
    line([&](std::size_t i) { return t.columns[i]; });
    line([&](std::size_t i) { return std::string(w[i], '-'); });
    for (const auto& r : t.rows) line([&](std::size_t i) { return cell_text(r[i]); });
}

bool in_closure(RegionLabel r) {
    switch (r) {
        case RegionLabel::GenusZeroInterior:
        case RegionLabel::LowTempSurface:
        case RegionLabel::HighTempSurface:
        case RegionLabel::GammaB:
        case RegionLabel::Multicritical: return true;
        default: return false;
    }
}

PhasePoint checked_point(double tau, double t, double h) {
    const PhasePoint pp{tau, t, h};
    const RegionLabel r = classify(pp);
    if (!(t < 0)) throw RegionError("t must be negative", r);
    if (!in_closure(r)) throw RegionError("point outside the genus-zero region", r);
    return pp;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? int(hw) : 1;
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <class F>
void parallel_for(int n, int threads, F&& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) body(i);
        });
    for (auto& th : pool) th.join();
}

struct Range {
    double lo, hi;
    int n;
    double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

Range parse_range(const std::string& s, const std::string& what) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    Range r{};
    try {
        if (parts.size() != 3) throw std::invalid_argument("");
        std::size_t used = 0;
        r.lo = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("");
        r.hi = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("");
        r.n = std::stoi(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("");
    } catch (const std::logic_error&) {
        throw DomainError(what + " must look like lo:hi:n, got '" + s + "'");
    }
    if (!(r.n >= 1) || !std::isfinite(r.lo) || !std::isfinite(r.hi) || r.hi < r.lo)
        throw DomainError(what + " needs n >= 1 and lo <= hi");
    return r;
}

Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const Rational den(boost::multiprecision::cpp_int(s.substr(slash + 1)));
        if (den == 0) throw DomainError("zero denominator in " + s);
        return Rational(boost::multiprecision::cpp_int(s.substr(0, slash))) / den;
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
    const std::string frac = s.substr(dot + 1);
    std::string whole = s.substr(0, dot);
    const bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    using boost::multiprecision::cpp_int;
    const Rational v{cpp_int(whole)};
    Rational f{cpp_int(frac.empty() ? "0" : frac)};
    f /= Rational(boost::multiprecision::pow(cpp_int(10), unsigned(frac.size())));
    return neg ? Rational(v - f) : Rational(v + f);
}

// ---------------------------------------------------------------- commands

struct FreeEnergyArgs {
    double tau = 0, t = 0, H = 0, tol = 1e-11;
    std::string method = "uv";
};

Emission cmd_free_energy(const FreeEnergyArgs& a) {
    const PhasePoint pp = checked_point(a.tau, a.t, a.H);
    FreeEnergyResult fr;
    try {
        fr = a.method == "lambda" ? F_lambda_form(pp, a.tol) : F_eval(pp, a.tol);
    } catch (const BranchPointReached& e) {
        throw RegionError(e.what(), classify(pp));
    }
    Emission em;
    em.record["tau"] = a.tau;
    em.record["t"] = a.t;
    em.record["H"] = a.H;
    em.record["sigma"] = fr.sigma_used;
    em.record["F"] = fr.value;
    em.record["method"] = fr.method;
    em.record["quad_err"] = fr.quad_error_estimate;
    em.record["region"] = to_string(classify(pp));
    return em;
}

struct SweepArgs {
    std::string tau_range, t_range;
    double H = 0, tol = 1e-10;
};

Emission cmd_sweep(const SweepArgs& a, int threads) {
    const Range tr = parse_range(a.tau_range, "--tau-range");
    const Range rr = parse_range(a.t_range, "--t-range");
    Emission em;
    em.default_format = "csv";
    em.table.columns = {"tau", "t", "H", "region", "sigma", "F"};
    const int n = tr.n * rr.n;
    em.table.rows.resize(n);
    parallel_for(n, threads, [&](int idx) {
        const PhasePoint pp{tr.at(idx / rr.n), rr.at(idx % rr.n), a.H};
        const RegionLabel reg = classify(pp);
        Cell sigma, F;
        if (pp.t < 0 && in_closure(reg)) {
            try {
                const FreeEnergyResult fr = F_eval(pp, a.tol);
                sigma = fr.sigma_used;
                F = fr.value;
            } catch (const std::exception&) {
                // left blank: the point sits numerically on the boundary
            }
        }
        em.table.rows[idx] = {pp.tau, pp.t, pp.h, to_string(reg), sigma, F};
    });
    return em;
}

struct CheckArgs {
    std::string suite;
    int samples = 200, grid = 10;
    double a = 1.059, b = 0.880, c = 0.880;
};

Emission cmd_check(const CheckArgs& a, std::uint64_t seed) {
    CheckOptions opt;
    opt.samples = a.samples;
    opt.seed = seed;
    opt.grid = a.grid;
    opt.point = {a.a, a.b, a.c};
    std::vector<std::string> names = a.suite == "all" ? suite_names() : std::vector<std::string>{a.suite};
    Emission em;
    em.table.columns = {"suite", "pass", "checked", "worst", "failures", "first_witness"};
    json suites = json::array();
    bool all_pass = true;
    for (const auto& name : names) {
        const SuiteReport r = run_suite(name, opt);
        all_pass = all_pass && r.pass;
        json js;
        js["suite"] = r.suite;
        js["pass"] = r.pass;
        js["checked"] = r.checked;
        js["worst"] = r.worst;
        json wit = json::array();
        for (std::size_t i = 0; i < r.failures.size() && i < 50; ++i) {
            json w;
            w["where"] = r.failures[i].where;
            w["value"] = std::isfinite(r.failures[i].value) ? json(r.failures[i].value) : json(nullptr);
            w["threshold"] = r.failures[i].threshold;
            wit.push_back(std::move(w));
        }
        js["failure_count"] = r.failures.size();
        js["failures"] = std::move(wit);
        suites.push_back(std::move(js));
        em.table.rows.push_back({r.suite, r.pass, (long long)r.checked, r.worst, (long long)r.failures.size(),
                                 r.failures.empty() ? Cell{} : Cell{r.failures.front().where}});
    }
    em.record["pass"] = all_pass;
    em.record["suites"] = std::move(suites);
    em.exit_code = all_pass ? 0 : 1;
    return em;
}

struct PointArgs {
    double tau = 0, t = 0, H = 0;
};

Emission cmd_sigma(const PointArgs& a) {
    const PhasePoint pp{a.tau, a.t, a.H};
    const RegionLabel reg = classify(pp);
    if (!(a.tau > 0 && a.tau < 1)) throw RegionError("tau must lie in (0,1)", reg);
    SigmaSolution s;
    try {
        s = solve_sigma(pp);
    } catch (const BranchPointReached& e) {
        throw RegionError(e.what(), reg);
    }
    Emission em;
    em.record["tau"] = a.tau;
    em.record["t"] = a.t;
    em.record["H"] = a.H;
    em.record["sigma"] = s.sigma;
    em.record["converged"] = s.converged;
    em.record["steps"] = s.steps;
    em.record["hit_branch_point"] = s.hit_branch_point;
    em.record["region"] = to_string(reg);
    em.record["t_critical"] = t_critical(a.tau, a.H);
    return em;
}

struct PhaseArgs {
    std::optional<double> a, b, c, tau, t, H;
};

Emission cmd_phase(const PhaseArgs& a) {
    Emission em;
    if (a.a || a.b || a.c) {
        if (!(a.a && a.b && a.c)) throw DomainError("forward map needs all of --a --b --c");
        const ABCPoint p{*a.a, *a.b, *a.c};
        const PhasePoint pp = map_abc(p);
        em.record["a"] = p.a;
        em.record["b"] = p.b;
        em.record["c"] = p.c;
        em.record["tau"] = pp.tau;
        em.record["t"] = pp.t;
        em.record["H"] = pp.h;
        em.record["q"] = pp.q();
        em.record["sigma"] = p.a * p.a * p.b * p.c;
        em.record["jacobian"] = jacobian_abc(p);
        em.record["A"] = scale_A(p.a, p.b, p.c);
        em.record["B"] = scale_A(p.a, p.c, p.b);
        em.record["region"] = to_string(classify(pp));
        return em;
    }
    if (!(a.tau && a.t)) throw DomainError("give --a --b --c, or --tau --t [--H]");
    const PhasePoint pp = checked_point(*a.tau, *a.t, a.H.value_or(0.0));
    double sigma = 0;
    try {
        sigma = solve_sigma(pp).sigma;
    } catch (const BranchPointReached& e) {
        throw RegionError(e.what(), classify(pp));
    }
    const ABCPoint p = invert_phase_point(pp, sigma);
    const PhasePoint back = map_abc(p, false);
    em.record["tau"] = pp.tau;
    em.record["t"] = pp.t;
    em.record["H"] = pp.h;
    em.record["sigma"] = sigma;
    em.record["a"] = p.a;
    em.record["b"] = p.b;
    em.record["c"] = p.c;
    // (a,b,c) covers H <= 0; positive fields are reached through H -> -H
    em.record["field_mirrored"] = pp.h > 0;
    em.record["roundtrip_residual"] =
        std::max({std::abs(back.tau - pp.tau), std::abs(back.t - pp.t), std::abs(back.h + std::abs(pp.h))});
    em.record["region"] = to_string(classify(pp));
    return em;
}

struct SeriesArgs {
    double tau = 0, H = 0;
    int order = 6;
    std::string precision = "double";
};

Emission cmd_series(const SeriesArgs& a) {
    if (!(a.tau > 0 && a.tau < 1)) throw DomainError("tau must lie in (0,1)");
    if (a.order < 1) throw DomainError("order must be at least 1");
    Emission em;
    em.table.columns = {"k", "F_k", "sigma_k"};
    if (a.precision == "extended") {
        const auto F = F_series_hp(a.tau, a.H, a.order);
        const auto s = lagrange_sigma_coeffs_hp(a.tau, a.H, a.order);
        for (int k = 0; k <= a.order; ++k) em.table.rows.push_back({(long long)k, F[k].str(30), s.taylor[k].str(30)});
    } else {
        const auto F = F_series(a.tau, a.H, a.order);
        const auto s = lagrange_sigma_coeffs(a.tau, a.H, a.order);
        for (int k = 0; k <= a.order; ++k) em.table.rows.push_back({(long long)k, F[k], s.taylor[k]});
    }
    em.record["tau"] = a.tau;
    em.record["H"] = a.H;
    return em;
}

struct CurveArgs {
    double a = 0, b = 0, c = 0;
    std::string emit;
    int samples = 64;
};

Emission cmd_curve(const CurveArgs& a) {
    const ABCPoint p{a.a, a.b, a.c};
    const CurveData cd = curve_from_abc(p);
    Emission em;
    em.record["a"] = p.a;
    em.record["b"] = p.b;
    em.record["c"] = p.c;
    auto name_value = [&](std::initializer_list<std::pair<const char*, double>> kv) {
        em.table.columns = {"name", "value"};
        for (const auto& [k, v] : kv) em.table.rows.push_back({std::string(k), v});
    };
    if (a.emit == "branch-points") {
        name_value({{"alpha", cd.alpha}, {"beta", cd.beta}, {"A", cd.A}, {"B", cd.B}, {"tau", cd.phase.tau},
                    {"t", cd.phase.t}, {"H", cd.phase.h}, {"sigma", cd.sigma}});
    } else if (a.emit == "omega-constants") {
        const OmegaConstants oc = omega_constants_closed_form(cd);
        const OmegaExpansion ex = omega_expansion(cd);
        name_value({{"ell0", oc.ell0},
                    {"ell1", oc.ell1},
                    {"C1", oc.C1},
                    {"C2", oc.C2},
                    {"sheet1_constant", ex.sheet1_constant},
                    {"sheet3_z43", ex.sheet3_z43},
                    {"sheet3_z23", ex.sheet3_z23},
                    {"sheet3_constant", ex.sheet3_constant},
                    {"sheet3_zm23", ex.sheet3_zm23},
                    {"sheet3_zm43", ex.sheet3_zm43}});
    } else if (a.emit == "measures") {
        em.default_format = "csv";
        em.table.columns = {"s", "density", "which", "a", "b", "c"};
        const int n = std::max(1, a.samples);
        for (Measure m : {Measure::Mu, Measure::Nu}) {
            const double span = m == Measure::Mu ? std::numbers::pi : std::numbers::pi / 3;
            for (int k = 0; k < n; ++k) {
                const MeasureSample s = measure_density(cd, m, span * (k + 0.5) / n);
                em.table.rows.push_back({s.s, s.density, std::string(m == Measure::Mu ? "mu" : "nu"), p.a, p.b, p.c});
            }
        }
        em.record["mu_mass"] = measure_mass(cd);
    } else if (a.emit == "sextic-residual") {
        em.table.columns = {"radius", "theta", "residual"};
        const int n = std::max(1, a.samples);
        for (double r : {0.7, 1.0, 1.4})
            for (int k = 0; k < n; ++k) {
                const double th = 2 * std::numbers::pi * (k + 0.5) / n;
                em.table.rows.push_back({r, th, sextic_residual(cd, std::polar(r, th))});
            }
    } else {
        throw DomainError("unknown --emit value " + a.emit);
    }
    return em;
}

struct EnumerateArgs {
    int V = 3;
    std::string tau = "0.5", q = "1";
    double H = 0;
    bool exact = false;
};

Emission cmd_enumerate(const EnumerateArgs& a, int threads) {
    EnumerationOptions opt;
    opt.threads = threads;
    Emission em;
    if (a.exact) {
        if (a.H != 0) throw DomainError("exact mode takes the field as a rational --q, not --H");
        const Rational tau = parse_rational(a.tau), q = parse_rational(a.q);
        if (!(tau > 0 && tau < 1) || !(q > 0)) throw DomainError("need 0 < tau < 1 and q > 0");
        const auto w = wick_free_energy_series_exact(tau, q, a.V, opt);
        const Rational C = (q + 1 / q) / 2;
        const auto f = F_series_t<Rational>(tau, C, a.V);
        em.table.columns = {"V", "wick", "F_series", "equal"};
        for (int v = 1; v <= a.V; ++v) em.table.rows.push_back({(long long)v, w.genus0[v].str(), f[v].str(), w.genus0[v] == f[v]});
        em.record["tau"] = tau.str();
        em.record["q"] = q.str();
    } else {
        const double tau = std::stod(a.tau);
        if (!(tau > 0 && tau < 1)) throw DomainError("tau must lie in (0,1)");
        const auto w = wick_free_energy_series(tau, a.H, a.V, opt);
        const auto f = F_series(tau, a.H, a.V);
        em.table.columns = {"V", "wick", "F_series", "abs_diff"};
        for (int v = 1; v <= a.V; ++v) em.table.rows.push_back({(long long)v, w.genus0[v], f[v], std::abs(w.genus0[v] - f[v])});
        em.record["tau"] = tau;
        em.record["H"] = a.H;
    }
    return em;
}

struct SigmaCoeffArgs {
    double tau = 0;
    int order = 40;
    bool compare = false;
};

Emission cmd_sigma_coeffs(const SigmaCoeffArgs& a) {
    const std::vector<double> exact = sigma_coeff_exact_all(a.tau, a.order);
    Emission em;
    em.record["tau"] = a.tau;
    if (!a.compare) {
        em.table.columns = {"V", "exact"};
        for (int v = 1; v <= a.order; ++v) em.table.rows.push_back({(long long)v, exact[v]});
        return em;
    }
    em.table.columns = {"V", "exact", "estimate", "regime", "ratio"};
    const bool airy = std::abs(a.tau - 0.25) <= 0.05;
    const Regime reg = airy ? Regime::AiryUniform : a.tau < 0.25 ? Regime::LowTemp : Regime::HighTemp;
    for (int v = 1; v <= a.order; ++v) {
        Cell est, ratio;
        try {
            const double e = airy ? sigma_coeff_airy_value(a.tau, v) : sigma_coeff_leading(a.tau, v);
            est = e;
            ratio = e / exact[v];
        } catch (const RangeError&) {
            // the Airy argument left the validated range
        }
        em.table.rows.push_back({(long long)v, exact[v], est, to_string(reg), ratio});
    }
    return em;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& msg, const RegionLabel* reg) {
    json j;
    j["schema"] = kSchema;
    j["error"] = kind;
    j["message"] = msg;
    if (reg) j["region"] = to_string(*reg);
    err << j.dump() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Genus-zero quartic two-matrix Ising model: phase space, free energy, spectral curve, "
                 "enumeration and coefficient asymptotics"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value file merged under the flags; keys of a command take its name as section");

    RunConfig rc;
    std::string format;
    app.add_option("--format", format, "json | csv | table (default depends on the command)")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_option("--out", rc.out_path, "write output to this file instead of stdout");
    app.add_option("--threads", rc.threads, "worker threads (0: hardware concurrency)")
        ->envname("ISING2MM_THREADS")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--seed", rc.seed, "seed for sampling suites");

    FreeEnergyArgs fe;
    auto* s_fe = app.add_subcommand("free-energy", "planar free energy F(tau, t, H)");
    s_fe->add_option("--tau", fe.tau)->required();
    s_fe->add_option("--t", fe.t)->required();
    s_fe->add_option("--H", fe.H);
    s_fe->add_option("--method", fe.method)->check(CLI::IsMember({"uv", "lambda"}));
    s_fe->add_option("--tol", fe.tol);

    SweepArgs sw;
    auto* s_sw = app.add_subcommand("sweep", "phase-diagram grid; CSV columns tau,t,H,region,sigma,F");
    s_sw->add_option("--tau-range", sw.tau_range, "lo:hi:n")->required();
    s_sw->add_option("--t-range", sw.t_range, "lo:hi:m")->required();
    s_sw->add_option("--H", sw.H);
    s_sw->add_option("--tol", sw.tol);

    CheckArgs ck;
    auto* s_ck = app.add_subcommand("check", "invariant suites; exit 1 if any certificate fails");
    s_ck->add_option("--suite", ck.suite)
        ->required()
        ->check(CLI::IsMember({"lensing", "sextic", "discriminant", "roundtrip", "series", "all"}));
    s_ck->add_option("--samples", ck.samples)->check(CLI::PositiveNumber);
    s_ck->add_option("--grid", ck.grid, "lensing grid side")->check(CLI::PositiveNumber);
    s_ck->add_option("--a", ck.a, "extra lensing point");
    s_ck->add_option("--b", ck.b);
    s_ck->add_option("--c", ck.c);

    PointArgs sg;
    auto* s_sg = app.add_subcommand("sigma", "physical root of the sigma equation");
    s_sg->add_option("--tau", sg.tau)->required();
    s_sg->add_option("--t", sg.t)->required();
    s_sg->add_option("--H", sg.H);

    PhaseArgs ph;
    auto* s_ph = app.add_subcommand("phase", "(a,b,c) -> (tau,t,H), or the inverse from --tau --t --H");
    s_ph->add_option("--a", ph.a);
    s_ph->add_option("--b", ph.b);
    s_ph->add_option("--c", ph.c);
    s_ph->add_option("--tau", ph.tau);
    s_ph->add_option("--t", ph.t);
    s_ph->add_option("--H", ph.H);

    SeriesArgs se;
    auto* s_se = app.add_subcommand("series", "t-expansion of F and sigma");
    s_se->add_option("--tau", se.tau)->required();
    s_se->add_option("--H", se.H);
    s_se->add_option("--order", se.order);
    s_se->add_option("--precision", se.precision)->check(CLI::IsMember({"double", "extended"}));

    CurveArgs cu;
    auto* s_cu = app.add_subcommand("curve", "spectral-curve data for a point of R");
    s_cu->add_option("--a", cu.a)->required();
    s_cu->add_option("--b", cu.b)->required();
    s_cu->add_option("--c", cu.c)->required();
    s_cu->add_option("--emit", cu.emit)
        ->required()
        ->check(CLI::IsMember({"branch-points", "measures", "sextic-residual", "omega-constants"}));
    s_cu->add_option("--samples", cu.samples)->check(CLI::PositiveNumber);

    EnumerateArgs en;
    auto* s_en = app.add_subcommand("enumerate", "ribbon-graph expansion against the series");
    s_en->add_option("--V", en.V)->required()->check(CLI::Range(1, 6));
    s_en->add_option("--tau", en.tau, "decimal or p/q");
    s_en->add_option("--H", en.H);
    s_en->add_option("--q", en.q, "e^H as a rational, exact mode only");
    s_en->add_flag("--exact", en.exact);

    SigmaCoeffArgs sc;
    auto* s_sc = app.add_subcommand("sigma-coeffs", "exact coefficients V [t^V] sigma at H = 0");
    s_sc->add_option("--tau", sc.tau)->required();
    s_sc->add_option("--order", sc.order)->check(CLI::Range(1, 400));
    s_sc->add_flag("--compare-asymptotic", sc.compare);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        report_error(err, "UsageError", e.what(), nullptr);
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    rc.command = sub->get_name();
    rc.threads = resolve_threads(rc.threads);
    if (auto* cfg = app.get_config_ptr(); cfg && cfg->count()) rc.config_file = cfg->as<std::string>();
    for (const CLI::Option* o : sub->get_options()) {
        if (o->get_name() == "--help") continue;
        const std::string key = o->get_single_name();
        if (o->get_type_size() == 0) {
            rc.params[key] = o->count() > 0;
        } else if (o->count() > 0) {
            rc.params[key] = o->as<std::string>();
        } else if (!o->get_default_str().empty()) {
            rc.params[key] = o->get_default_str();
        } else {
            rc.params[key] = nullptr;
        }
    }

    try {
        Emission em;
        if (sub == s_fe) em = cmd_free_energy(fe);
        else if (sub == s_sw) em = cmd_sweep(sw, rc.threads);
        else if (sub == s_ck) em = cmd_check(ck, rc.seed);
        else if (sub == s_sg) em = cmd_sigma(sg);
        else if (sub == s_ph) em = cmd_phase(ph);
        else if (sub == s_se) em = cmd_series(se);
        else if (sub == s_cu) em = cmd_curve(cu);
        else if (sub == s_en) em = cmd_enumerate(en, rc.threads);
        else em = cmd_sigma_coeffs(sc);

        rc.format = format.empty() ? em.default_format : format;
        if (rc.out_path.empty()) {
            emit(em, rc, out);
        } else {
            std::ofstream f(rc.out_path);
            if (!f) {
                report_error(err, "IOError", "cannot open " + rc.out_path, nullptr);
                return 2;
            }
            emit(em, rc, f);
        }
        if (em.exit_code == 1) report_error(err, "CertificateFailure", "at least one check failed", nullptr);
        return em.exit_code;
    } catch (const RegionError& e) {
        report_error(err, "DomainError", e.what(), &e.region);
        return 2;
    } catch (const CertificateFailure& e) {
        report_error(err, "CertificateFailure", e.what(), nullptr);
        return 1;
    } catch (const std::domain_error& e) {
        report_error(err, "DomainError", e.what(), nullptr);
        return 2;
    } catch (const std::exception& e) {
        report_error(err, "NumericalFailure", e.what(), nullptr);
        return 3;
    }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

}  // namespace ising2mm
