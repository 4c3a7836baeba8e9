#pragma once

// Exact integer computations on adjacency matrices: closed-walk counts
// (traces of matrix powers), the characteristic polynomial, and the
// Mobius function used for orbit counting. Everything here is exact;
// floats never enter.

#include <cstdint>
#include <vector>

#include "sft/common.hpp"
#include "sft/graph.hpp"

namespace sft {

// N_p = trace(A^p) for p = 1..p_max. Index p is 1-based; result[0] is
// unused and zero. Runs a uint64 fast path and falls back to big
// integers on overflow.
inline std::vector<BigInt> closed_walk_counts(const Graph& g, int p_max) {
    if (p_max < 0) throw std::invalid_argument("p_max must be nonnegative");
    const int n = g.vertex_count();
    std::vector<BigInt> traces(p_max + 1, 0);

    bool overflow = false;
    {
        std::vector<std::uint64_t> totals(p_max + 1, 0);
        std::vector<std::uint64_t> x(n), y(n);
        for (int start = 0; start < n && !overflow; ++start) {
            std::fill(x.begin(), x.end(), 0);
            x[start] = 1;
            for (int p = 1; p <= p_max && !overflow; ++p) {
                std::fill(y.begin(), y.end(), 0);
                for (int e = 0; e < g.edge_count(); ++e) {
                    auto [u, v] = g.edge(e);
                    if (__builtin_add_overflow(y[v], x[u], &y[v])) {
                        overflow = true;
                        break;
                    }
                }
                if (overflow) break;
                x.swap(y);
                if (__builtin_add_overflow(totals[p], x[start], &totals[p])) overflow = true;
            }
        }
        if (!overflow) {
            for (int p = 1; p <= p_max; ++p) traces[p] = totals[p];
            return traces;
        }
    }

    std::vector<BigInt> x(n), y(n);
    for (int start = 0; start < n; ++start) {
        std::fill(x.begin(), x.end(), BigInt(0));
        x[start] = 1;
        for (int p = 1; p <= p_max; ++p) {
            std::fill(y.begin(), y.end(), BigInt(0));
            for (int e = 0; e < g.edge_count(); ++e) {
                auto [u, v] = g.edge(e);
                y[v] += x[u];
            }
            x.swap(y);
            traces[p] += x[start];
        }
    }
    return traces;
}

// Characteristic polynomial det(tI - A) with exact integer coefficients,
// ascending: result[k] is the coefficient of t^k, result[n] == 1.
// Faddeev-LeVerrier; every division is exact. Size-capped.
inline std::vector<BigInt> char_poly(const Graph& g) {
    const int n = g.vertex_count();
    if (n > kCharPolyMaxVertices)
        throw CapExceeded("characteristic polynomial limited to " +
                          std::to_string(kCharPolyMaxVertices) + " vertices, got " +
                          std::to_string(n));
    std::vector<BigInt> coeff(n + 1, 0);
    coeff[n] = 1;
    if (n == 0) return coeff;

    std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n, 0));
    for (int e = 0; e < g.edge_count(); ++e) a[g.edge_from(e)][g.edge_to(e)] = 1;

    auto trace = [&](const std::vector<std::vector<BigInt>>& m) {
        BigInt t = 0;
        for (int i = 0; i < n; ++i) t += m[i][i];
        return t;
    };

    std::vector<std::vector<BigInt>> m = a;
    coeff[n - 1] = -trace(m);
    for (int k = 2; k <= n; ++k) {
        for (int i = 0; i < n; ++i) m[i][i] += coeff[n - k + 1];
        std::vector<std::vector<BigInt>> next(n, std::vector<BigInt>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l) {
                if (a[i][l] == 0) continue;  // 0/1 adjacency: row sparsity
                for (int j = 0; j < n; ++j) next[i][j] += m[l][j];
            }
        m = std::move(next);
        BigInt t = -trace(m);
        coeff[n - k] = t / k;  // exact by construction
    }
    return coeff;
}

// Number-theoretic Mobius function mu(1..n) via a smallest-prime-factor
// sieve. Internal arithmetic helper for orbit counting.
inline std::vector<int> mobius_sieve(int n) {
    std::vector<int> mu(n + 1, 0), spf(n + 1, 0), primes;
    if (n >= 1) mu[1] = 1;
    for (int i = 2; i <= n; ++i) {
        if (spf[i] == 0) {
            spf[i] = i;
            mu[i] = -1;
            primes.push_back(i);
        }
        for (int p : primes) {
            if (p > spf[i] || static_cast<long long>(p) * i > n) break;
            spf[p * i] = p;
            mu[p * i] = (i % p == 0) ? 0 : -mu[i];
        }
    }
    return mu;
}

// Trace and orbit counts up to p_max: traces[p] = N_p = |Per_p| and
// counts[p] = number of periodic orbits of least period exactly p,
// related by N_p = sum_{d|p} d*c_d (Mobius inversion). Exact integers.
struct OrbitCensus {
    int p_max = 0;
    std::vector<BigInt> traces;  // index p, 1-based
    std::vector<BigInt> counts;  // index p, 1-based
};

inline OrbitCensus orbit_census(const Graph& g, int p_max) {
    if (p_max < 1) throw std::invalid_argument("p_max must be positive");
    OrbitCensus census;
    census.p_max = p_max;
    census.traces = closed_walk_counts(g, p_max);
    census.counts.assign(p_max + 1, 0);
    std::vector<int> mu = mobius_sieve(p_max);
    for (int p = 1; p <= p_max; ++p) {
        BigInt total = 0;
        for (int d = 1; d <= p; ++d)
            if (p % d == 0) total += mu[p / d] * census.traces[d];
        if (total % p != 0) throw std::logic_error("orbit count inversion not divisible");
        census.counts[p] = total / p;
        if (census.counts[p] < 0) throw std::logic_error("negative orbit count");
    }
    return census;
}

// Minimal n such that every ordered pair (i,j) is connected by a path of
// some length k <= n. Boolean matrix powers over bitset rows; the graph
// must be irreducible (otherwise no finite n exists).
inline int transition_length(const Graph& g) {
    const int n = g.vertex_count();
    if (n == 0 || !is_irreducible(g))
        throw std::invalid_argument("transition length requires an irreducible graph");
    const int words = (n + 63) / 64;
    auto idx = [&](int row, int word) { return row * words + word; };
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * words, 0),
        power(static_cast<std::size_t>(n) * words, 0),
        acc(static_cast<std::size_t>(n) * words, 0);
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edge(e);
        adj[idx(u, v / 64)] |= 1ull << (v % 64);
    }
    power = adj;
    acc = adj;
    auto all_pairs = [&]() {
        for (int i = 0; i < n; ++i) {
            for (int w = 0; w < words; ++w) {
                std::uint64_t expect = (w + 1) * 64 <= n ? ~0ull
                                        : (n % 64 ? (1ull << (n % 64)) - 1 : ~0ull);
                if ((acc[idx(i, w)] & expect) != expect) return false;
            }
        }
        return true;
    };
    // R <= |V| on an irreducible graph: simple paths cover i != j and a
    // shortest cycle covers (i,i).
    for (int k = 1; k <= n; ++k) {
        if (all_pairs()) return k;
        // power <- power * adj (boolean)
        std::vector<std::uint64_t> next(static_cast<std::size_t>(n) * words, 0);
        for (int i = 0; i < n; ++i)
            for (int w = 0; w < words; ++w) {
                std::uint64_t bits = power[idx(i, w)];
                while (bits) {
                    int j = w * 64 + __builtin_ctzll(bits);
                    bits &= bits - 1;
                    for (int w2 = 0; w2 < words; ++w2) next[idx(i, w2)] |= adj[idx(j, w2)];
                }
            }
        power = std::move(next);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] |= power[i];
    }
    throw std::logic_error("transition length did not stabilize on an irreducible graph");
}

}  // namespace sft
