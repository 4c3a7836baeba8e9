#pragma once

// Structural invariants of a single graph (m, z, U, R, Cheeger
// constants, spectral gap) and condition diagnostics (C1-C8) for graph
// sequences. Everything that is a sup/inf over unbounded n is explored
// with an explicit cap and reported three-valued: exact, ">=cap", or an
// error; capped values are never silently wrong.
//
// z(G) measures separation of periodic points: the largest horizon n
// such that distinct periodic orbits of period <= n are pairwise
// vertex-disjoint. Two closed walks count as the same orbit when they
// trace the same bi-infinite sequence (rotations and repeated
// traversals of one primitive cycle). A primitive orbit that revisits
// a vertex forces a shorter orbit inside its own vertex set, so the
// incremental scan below only ever stores pairwise-disjoint simple
// cycles.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sft/common.hpp"
#include "sft/exact.hpp"
#include "sft/graph.hpp"
#include "sft/spectral.hpp"

namespace sft {

// m(G) = ceil(log_lambda |V|), with a half-ulp guard at integer
// boundaries so that e.g. log_2(2) does not round up to 2.
inline int compute_m(const Graph& g) {
    double lambda = spectral_radius(g);
    if (lambda <= 1.0)
        throw std::invalid_argument("m(G) requires spectral radius > 1");
    double r = std::log(static_cast<double>(g.vertex_count())) / std::log(lambda);
    double nearest = std::round(r);
    if (std::abs(r - nearest) < 1e-9) return static_cast<int>(nearest);
    return static_cast<int>(std::ceil(r));
}

inline CappedInt compute_z(const Graph& g, int cap, std::int64_t enum_cap = kDefaultEnumCap) {
    if (cap < 1) throw std::invalid_argument("z cap must be positive");
    const int words = (g.vertex_count() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> stored;  // vertex sets of primitive orbits
    for (int p = 1; p <= cap; ++p) {
        OrbitSet orbits = enumerate_periodic(g, p, enum_cap);
        for (const auto& rep : orbits.reps) {
            if (detail::cyclic_primitive_period(rep) < p) continue;  // power of a shorter orbit
            std::vector<std::uint64_t> bits(words, 0);
            int distinct = 0;
            for (int e : rep) {
                int v = g.edge_from(e);
                if (!((bits[v / 64] >> (v % 64)) & 1)) {
                    bits[v / 64] |= 1ull << (v % 64);
                    ++distinct;
                }
            }
            if (distinct < p) return {p - 1, false};  // non-simple orbit, Lemma-forced overlap
            for (const auto& other : stored)
                for (int w = 0; w < words; ++w)
                    if (bits[w] & other[w]) return {p - 1, false};
            stored.push_back(std::move(bits));
        }
    }
    return {cap, true};
}

struct UResult {
    CappedInt u1, u2, u;
};

// U1: largest n with all entries of A^n <= 1 (saturating counts).
// U2: largest n such that for every start vertex u and 1 <= s < t <= n
// at most one path of length t from u has its s-th edge equal to its
// last edge. U = min(U1, U2).
inline UResult compute_U(const Graph& g, int cap, std::int64_t enum_cap = kDefaultEnumCap) {
    if (cap < 1) throw std::invalid_argument("U cap must be positive");
    const int n = g.vertex_count();
    if (n > 2048) throw CapExceeded("compute_U limited to 2048 vertices");
    UResult result;

    {  // U1 by saturating sparse row multiplication
        std::vector<std::uint8_t> b(static_cast<std::size_t>(n) * n, 0);
        for (int e = 0; e < g.edge_count(); ++e) b[g.edge_from(e) * n + g.edge_to(e)] = 1;
        int u1 = -1;
        for (int k = 1; k <= cap && u1 < 0; ++k) {
            bool saturated = false;
            for (std::size_t i = 0; i < b.size() && !saturated; ++i) saturated = b[i] > 1;
            if (saturated) {
                u1 = k - 1;
                break;
            }
            if (k == cap) {
                result.u1 = {cap, true};
                break;
            }
            std::vector<std::uint8_t> next(static_cast<std::size_t>(n) * n, 0);
            for (int i = 0; i < n; ++i)
                for (int mid = 0; mid < n; ++mid) {
                    std::uint8_t w = b[static_cast<std::size_t>(i) * n + mid];
                    if (!w) continue;
                    for (int e : g.out_edges(mid)) {
                        std::uint8_t& cell = next[static_cast<std::size_t>(i) * n + g.edge_to(e)];
                        cell = static_cast<std::uint8_t>(std::min(2, cell + w));
                    }
                }
            b = std::move(next);
        }
        if (u1 >= 0) result.u1 = {u1, false};
    }

    {  // U2 by bounded path search
        int best = cap;
        bool at_cap = true;
        std::int64_t visited = 0;
        std::vector<std::vector<int>> count(cap + 1, std::vector<int>(cap + 1, 0));
        std::vector<int> walk;
        for (int start = 0; start < n && best >= 1; ++start) {
            for (auto& row : count) std::fill(row.begin(), row.end(), 0);
            struct Frame { int vertex; std::size_t pos; };
            std::vector<Frame> stack{{start, 0}};
            walk.clear();
            while (!stack.empty()) {
                Frame& f = stack.back();
                int depth = static_cast<int>(stack.size()) - 1;
                const auto& outs = g.out_edges(f.vertex);
                if (depth == best || f.pos >= outs.size()) {
                    stack.pop_back();
                    if (!walk.empty() && depth > 0) walk.pop_back();
                    continue;
                }
                int e = outs[f.pos++];
                walk.push_back(e);
                stack.push_back({g.edge_to(e), 0});
                if (++visited > enum_cap) throw CapExceeded("U2 path search cap exceeded");
                int t = depth + 1;
                for (int s = 1; s < t; ++s) {
                    if (walk[s - 1] != walk[t - 1]) continue;
                    if (++count[t][s] >= 2) {
                        best = std::min(best, t - 1);
                        at_cap = false;
                    }
                }
            }
        }
        result.u2 = {best, at_cap};
    }

    if (!result.u1.at_cap && (result.u2.at_cap || result.u1.value <= result.u2.value))
        result.u = result.u1;
    else if (!result.u2.at_cap)
        result.u = result.u2;
    else
        result.u = {cap, true};
    return result;
}

inline int compute_R(const Graph& g) { return transition_length(g); }

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    static Rational reduced(std::int64_t n, std::int64_t d) {
        std::int64_t f = std::gcd(n, d);
        if (f == 0) return {n, d};
        return {n / f, d / f};
    }
};

// Unweighted Cheeger constant: min over 0 < |S| <= |V|/2 of
// |E(S, complement)| / |S|, exact rational by exhaustive subset search.
inline Rational cheeger(const Graph& g) {
    const int n = g.vertex_count();
    if (n > kCheegerMaxVertices)
        throw CapExceeded("cheeger constant limited to " + std::to_string(kCheegerMaxVertices) +
                          " vertices");
    if (n < 2) throw std::invalid_argument("cheeger constant needs at least two vertices");
    std::int64_t best_num = -1, best_den = 1;
    const std::uint32_t full = (n == 32) ? 0xffffffffu : ((1u << n) - 1);
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        int size = __builtin_popcount(mask);
        if (2 * size > n) continue;
        std::int64_t cross = 0;
        for (int e = 0; e < g.edge_count(); ++e) {
            auto [u, v] = g.edge(e);
            if ((mask >> u & 1) && !(mask >> v & 1)) ++cross;
        }
        if (best_num < 0 || cross * best_den < best_num * size) {
            best_num = cross;
            best_den = size;
        }
    }
    return Rational::reduced(best_num, best_den);
}

// Weighted Cheeger constant with F(e) = mu(e), the Parry edge mass.
inline double weighted_cheeger(const Graph& g) {
    const int n = g.vertex_count();
    if (n > kCheegerMaxVertices)
        throw CapExceeded("weighted cheeger constant limited to " +
                          std::to_string(kCheegerMaxVertices) + " vertices");
    if (n < 2) throw std::invalid_argument("cheeger constant needs at least two vertices");
    ParryMeasure m = parry_measure(g);
    double best = std::numeric_limits<double>::infinity();
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        double f_s = 0.0;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) f_s += m.vertex_mass[v];
        double cross = 0.0;
        for (int e = 0; e < g.edge_count(); ++e) {
            auto [u, v] = g.edge(e);
            if ((mask >> u & 1) && !(mask >> v & 1)) cross += m.edge_mass[e];
        }
        best = std::min(best, cross / std::min(f_s, 1.0 - f_s));
    }
    return best;
}

// g(G) = min over the nonzero spectrum minus one copy of the Perron
// root of 1 - |lambda_i|/lambda; 1.0 by convention when the nonzero
// spectrum is {lambda} alone (flagged in reports).
inline double spectral_gap(const SpectralData& data) {
    if (!data.exact_available)
        throw CapExceeded("spectral gap needs the nonzero spectrum (size cap)");
    if (data.nonzero_spectrum.size() <= 1) return 1.0;
    double best = std::numeric_limits<double>::infinity();
    // spectrum is sorted by descending modulus; entry 0 is the Perron root
    for (std::size_t i = 1; i < data.nonzero_spectrum.size(); ++i)
        best = std::min(best, 1.0 - std::abs(data.nonzero_spectrum[i]) / data.lambda);
    return best;
}

inline double spectral_gap(const Graph& g) { return spectral_gap(perron_data(g)); }

inline int d_max(const Graph& g) {
    int best = 0;
    for (int v = 0; v < g.vertex_count(); ++v)
        best = std::max(best, std::max(g.out_degree(v), g.in_degree(v)));
    return best;
}

// ---------------------------------------------------------------------------
// Reports

struct InvariantCaps {
    int z_cap = 12;
    int u_cap = 12;
    std::int64_t enum_cap = kDefaultEnumCap;
};

struct InvariantReport {
    int n = 0;  // position in the sequence (block length for n-block runs)
    int vertices = 0;
    int edges = 0;
    int degree_max = 0;
    std::optional<int> m;
    CappedInt z, u1, u2, u;
    std::optional<int> r;
    std::optional<Rational> cheeger_c;
    std::optional<double> cheeger_w;
    std::optional<double> gap;
    bool gap_by_convention = false;  // nonzero spectrum was {lambda} only
    std::optional<int> per;
    double lambda = 0.0;
    // eigenvector / measure distortion ratios (irreducible graphs only)
    std::optional<double> w_distortion, v_distortion, mu_vertex_distortion, mu_edge_distortion;
    InvariantCaps caps;
};

inline InvariantReport invariant_report(const Graph& g, const InvariantCaps& caps = {},
                                        int n_index = 1) {
    InvariantReport rep;
    rep.n = n_index;
    rep.caps = caps;
    rep.vertices = g.vertex_count();
    rep.edges = g.edge_count();
    rep.degree_max = d_max(g);
    rep.lambda = spectral_radius(g);
    rep.per = period(g);
    if (rep.lambda > 1.0) rep.m = compute_m(g);
    rep.z = compute_z(g, caps.z_cap, caps.enum_cap);
    UResult u = compute_U(g, caps.u_cap, caps.enum_cap);
    rep.u1 = u.u1;
    rep.u2 = u.u2;
    rep.u = u.u;
    if (is_irreducible(g)) {
        rep.r = compute_R(g);
        ParryMeasure m = parry_measure(g);
        auto ratio = [](const std::vector<double>& xs) {
            double lo = *std::min_element(xs.begin(), xs.end());
            double hi = *std::max_element(xs.begin(), xs.end());
            return hi / lo;
        };
        rep.w_distortion = ratio(m.spectral.left);
        rep.v_distortion = ratio(m.spectral.right);
        rep.mu_vertex_distortion = ratio(m.vertex_mass);
        rep.mu_edge_distortion = ratio(m.edge_mass);
        if (m.spectral.exact_available) {
            rep.gap = spectral_gap(m.spectral);
            rep.gap_by_convention = m.spectral.nonzero_spectrum.size() <= 1;
        }
        if (g.vertex_count() <= kCheegerMaxVertices) {
            rep.cheeger_c = cheeger(g);
            rep.cheeger_w = weighted_cheeger(g);
        }
    }
    return rep;
}

enum class Flag { kSatisfied, kViolated, kUnknown };

inline const char* flag_name(Flag f) {
    switch (f) {
        case Flag::kSatisfied: return "satisfied";
        case Flag::kViolated: return "violated";
        default: return "unknown";
    }
}

struct ConditionFlags {
    bool standing_traces_equal = true;
    Flag c1 = Flag::kUnknown;  // bounded degree
    Flag c2 = Flag::kUnknown;  // z -> infinity
    Flag c3 = Flag::kUnknown;  // z >= C m
    Flag c4 = Flag::kUnknown;  // U >= m - C
    Flag c5 = Flag::kUnknown;  // R <= m + C
    Flag c6 = Flag::kUnknown;  // bounded mu distortion
    Flag c7 = Flag::kUnknown;  // bounded eigenvector distortion
    Flag c8 = Flag::kUnknown;  // uniform expander (both directions)
    double c3_constant = 0.0, c4_constant = 0.0, c5_constant = 0.0, c7_constant = 0.0;
};

struct ConditionReport {
    std::vector<InvariantReport> rows;
    ConditionFlags flags;
};

// Per-graph invariant table plus trend flags over the sequence. All
// graphs must be irreducible. The flags are finite-window diagnostics:
// exact equality for integer data, bounded-growth heuristics for the
// distortion ratios, unknown where a cap or size limit intervenes.
inline ConditionReport condition_report(const std::vector<Graph>& gs,
                                        const InvariantCaps& caps = {}) {
    if (gs.empty()) throw std::invalid_argument("condition report needs at least one graph");
    for (const auto& g : gs)
        if (!is_irreducible(g))
            throw std::invalid_argument("condition report requires irreducible graphs");
    ConditionReport report;
    for (std::size_t i = 0; i < gs.size(); ++i)
        report.rows.push_back(invariant_report(gs[i], caps, static_cast<int>(i) + 1));

    const int trace_horizon = 10;
    std::vector<BigInt> base = closed_walk_counts(gs.front(), trace_horizon);
    for (std::size_t i = 1; i < gs.size(); ++i)
        if (closed_walk_counts(gs[i], trace_horizon) != base)
            report.flags.standing_traces_equal = false;

    auto& rows = report.rows;
    auto& flags = report.flags;

    flags.c1 = Flag::kSatisfied;
    for (const auto& r : rows)
        if (r.degree_max != rows.front().degree_max) flags.c1 = Flag::kViolated;

    // C2: z should grow along the sequence; a finite window can only
    // refute (z decreasing) or weakly support.
    if (rows.size() == 1) {
        flags.c2 = Flag::kSatisfied;
    } else {
        bool nondecreasing = true;
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i].z.value < rows[i - 1].z.value) nondecreasing = false;
        bool grows = rows.back().z.value > rows.front().z.value || rows.back().z.at_cap;
        flags.c2 = !nondecreasing ? Flag::kViolated : (grows ? Flag::kSatisfied : Flag::kUnknown);
    }

    {  // C3: fitted C = min z/m
        double c = std::numeric_limits<double>::infinity();
        bool all_m = true;
        for (const auto& r : rows) {
            if (!r.m) { all_m = false; break; }
            if (*r.m > 0) c = std::min(c, static_cast<double>(r.z.value) / *r.m);
        }
        if (!all_m) {
            flags.c3 = Flag::kUnknown;
        } else {
            flags.c3_constant = c;
            flags.c3 = c > 0 ? Flag::kSatisfied : Flag::kViolated;
        }
    }

    {  // C4: deficit m - U must not grow across the window
        double worst = -std::numeric_limits<double>::infinity();
        double worst_first_half = worst;
        bool all_m = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].m) { all_m = false; break; }
            double deficit = *rows[i].m - static_cast<double>(rows[i].u.value);
            worst = std::max(worst, deficit);
            if (i < (rows.size() + 1) / 2) worst_first_half = std::max(worst_first_half, deficit);
        }
        if (!all_m) {
            flags.c4 = Flag::kUnknown;
        } else {
            flags.c4_constant = worst;
            flags.c4 = worst <= worst_first_half ? Flag::kSatisfied : Flag::kUnknown;
        }
    }

    {  // C5: excess R - m must not grow across the window
        double worst = -std::numeric_limits<double>::infinity();
        double worst_first_half = worst;
        bool ok = true;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].m || !rows[i].r) { ok = false; break; }
            double excess = *rows[i].r - static_cast<double>(*rows[i].m);
            worst = std::max(worst, excess);
            if (i < (rows.size() + 1) / 2) worst_first_half = std::max(worst_first_half, excess);
        }
        if (!ok) {
            flags.c5 = Flag::kUnknown;
        } else {
            flags.c5_constant = worst;
            flags.c5 = worst <= worst_first_half ? Flag::kSatisfied : Flag::kUnknown;
        }
    }

    auto bounded_ratio = [&](auto getter) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& r : rows) {
            auto v = getter(r);
            if (!v) return Flag::kUnknown;
            lo = std::min(lo, *v);
            hi = std::max(hi, *v);
        }
        return hi <= lo * 1.25 ? Flag::kSatisfied : Flag::kUnknown;
    };
    flags.c6 = bounded_ratio([](const InvariantReport& r) {
        if (!r.mu_vertex_distortion || !r.mu_edge_distortion) return std::optional<double>{};
        return std::optional<double>{std::max(*r.mu_vertex_distortion, *r.mu_edge_distortion)};
    });
    {
        double k = 0.0;
        Flag f = bounded_ratio([](const InvariantReport& r) {
            if (!r.w_distortion || !r.v_distortion) return std::optional<double>{};
            return std::optional<double>{std::max(*r.w_distortion, *r.v_distortion)};
        });
        for (const auto& r : rows)
            if (r.w_distortion && r.v_distortion)
                k = std::max(k, std::max(*r.w_distortion, *r.v_distortion));
        flags.c7 = f;
        flags.c7_constant = k;
    }

    {  // C8: needs Cheeger constants for both G and its transpose
        double worst = std::numeric_limits<double>::infinity();
        int computed = 0;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            if (!rows[i].cheeger_c) continue;
            double forward = rows[i].cheeger_c->value();
            double backward = cheeger(transpose(gs[i])).value();
            worst = std::min(worst, std::min(forward, backward));
            ++computed;
        }
        if (computed == 0)
            flags.c8 = Flag::kUnknown;
        else if (worst <= 0)
            flags.c8 = Flag::kViolated;
        else
            flags.c8 = computed == static_cast<int>(gs.size()) ? Flag::kSatisfied : Flag::kUnknown;
    }

    return report;
}

// CSV serialization: one row per graph, trend flags as trailing comment
// lines.
inline std::string condition_report_csv(const ConditionReport& report) {
    std::ostringstream out;
    out << "n,vertices,edges,d_max,m,z,U1,U2,U,R,c,c_w,gap,per,lambda,w_dist,v_dist,mu_v_dist,mu_e_dist\n";
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.12g", x);
        return std::string(buf);
    };
    for (const auto& r : report.rows) {
        out << r.n << ',' << r.vertices << ',' << r.edges << ',' << r.degree_max << ',';
        out << (r.m ? std::to_string(*r.m) : "") << ',';
        out << r.z.str() << ',' << r.u1.str() << ',' << r.u2.str() << ',' << r.u.str() << ',';
        out << (r.r ? std::to_string(*r.r) : "") << ',';
        out << (r.cheeger_c ? std::to_string(r.cheeger_c->num) + "/" + std::to_string(r.cheeger_c->den) : "") << ',';
        out << (r.cheeger_w ? num(*r.cheeger_w) : "") << ',';
        out << (r.gap ? num(*r.gap) + (r.gap_by_convention ? "(conv)" : "") : "") << ',';
        out << (r.per ? std::to_string(*r.per) : "") << ',';
        out << num(r.lambda) << ',';
        out << (r.w_distortion ? num(*r.w_distortion) : "") << ',';
        out << (r.v_distortion ? num(*r.v_distortion) : "") << ',';
        out << (r.mu_vertex_distortion ? num(*r.mu_vertex_distortion) : "") << ',';
        out << (r.mu_edge_distortion ? num(*r.mu_edge_distortion) : "") << '\n';
    }
    const auto& f = report.flags;
    out << "# standing_traces_equal=" << (f.standing_traces_equal ? "true" : "false") << '\n';
    out << "# C1=" << flag_name(f.c1) << " C2=" << flag_name(f.c2) << " C3=" << flag_name(f.c3)
        << " C4=" << flag_name(f.c4) << " C5=" << flag_name(f.c5) << " C6=" << flag_name(f.c6)
        << " C7=" << flag_name(f.c7) << " C8=" << flag_name(f.c8) << '\n';
    out << "# fitted: C3=" << f.c3_constant << " C4=" << f.c4_constant << " C5=" << f.c5_constant
        << " C7=" << f.c7_constant << '\n';
    return out.str();
}

}  // namespace sft
