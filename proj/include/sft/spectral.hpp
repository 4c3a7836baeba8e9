#pragma once

// Perron-Frobenius data, the Artin-Mazur zeta function, the Parry
// measure (measure of maximal entropy), and entropy.
//
// The Perron root is always computed by power iteration on A + I; the
// shift makes the dominant eigenvalue simple in modulus on any
// irreducible component, so no period detection is needed. Collatz-
// Wielandt ratio bounds double as the convergence certificate: at exit
// the per-component relative residual is below the tolerance.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "sft/common.hpp"
#include "sft/exact.hpp"
#include "sft/graph.hpp"

namespace sft {

namespace detail {

// Perron root of an irreducible local graph given by (from,to) edge
// pairs over nv vertices. Writes the positive right eigenvector
// (inf-norm 1) into *eigvec when requested.
inline double perron_root_local(int nv, const std::vector<std::pair<int, int>>& edges,
                                std::vector<double>* eigvec = nullptr,
                                double tol = kPowerIterTol, int max_iter = kPowerIterCap) {
    if (nv == 0) return 0.0;
    std::vector<double> x(nv, 1.0), y(nv);
    for (int iter = 0; iter < max_iter; ++iter) {
        for (int i = 0; i < nv; ++i) y[i] = x[i];  // the +I shift
        for (const auto& [u, v] : edges) y[u] += x[v];
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        double norm = 0.0;
        for (int i = 0; i < nv; ++i) {
            double ratio = y[i] / x[i];
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            norm = std::max(norm, y[i]);
        }
        for (int i = 0; i < nv; ++i) x[i] = y[i] / norm;
        if (hi - lo <= tol * hi) {
            if (eigvec) *eigvec = x;
            return 0.5 * (lo + hi) - 1.0;
        }
    }
    throw std::runtime_error("power iteration did not converge within " +
                             std::to_string(max_iter) + " iterations");
}

inline std::vector<std::pair<int, int>> component_local_edges(
    const Graph& g, const std::vector<int>& members, const std::vector<int>& comp,
    int comp_id, std::vector<int>& local_of) {
    for (std::size_t i = 0; i < members.size(); ++i) local_of[members[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> edges;
    for (int v : members)
        for (int e : g.out_edges(v)) {
            int to = g.edge_to(e);
            if (comp[to] == comp_id) edges.emplace_back(local_of[v], local_of[to]);
        }
    return edges;
}

}  // namespace detail

// Max over strongly connected components of the Perron root; 0 for an
// acyclic graph.
inline double spectral_radius(const Graph& g) {
    auto comps = scc_decompose(g);
    if (comps.empty()) return 0.0;
    std::vector<int> comp;
    detail::scc_assign(g, {}, comp);
    std::vector<int> local_of(g.vertex_count(), -1);
    double best = 0.0;
    for (const auto& members : comps) {
        auto edges = detail::component_local_edges(g, members, comp, comp[members.front()], local_of);
        best = std::max(best,
                        detail::perron_root_local(static_cast<int>(members.size()), edges));
    }
    return best;
}

struct SpectralData {
    double lambda = 0.0;
    std::vector<double> left;   // w, row eigenvector
    std::vector<double> right;  // v, column eigenvector; normalized so w.v = 1
    std::vector<BigInt> char_poly;                        // ascending; empty beyond size cap
    std::vector<std::complex<double>> nonzero_spectrum;   // descending modulus
    bool exact_available = false;
};

namespace detail {

// Nonzero roots of the (monic, integer) characteristic polynomial via
// the companion matrix of the t^s-deflated polynomial.
inline std::vector<std::complex<double>> nonzero_roots(const std::vector<BigInt>& poly) {
    const int n = static_cast<int>(poly.size()) - 1;
    int s = 0;
    while (s <= n && poly[s] == 0) ++s;
    const int d = n - s;
    std::vector<std::complex<double>> roots;
    if (d == 0) return roots;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i)
        companion(i, d - 1) = -static_cast<double>(poly[s + i].convert_to<double>());
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    for (int i = 0; i < d; ++i) roots.emplace_back(solver.eigenvalues()[i]);
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return roots;
}

}  // namespace detail

// Full Perron data of an irreducible graph. The characteristic
// polynomial and nonzero spectrum are exact-integer-backed and only
// available up to kCharPolyMaxVertices; above that the fields stay
// empty and exact_available is false.
inline SpectralData perron_data(const Graph& g) {
    if (!is_irreducible(g)) throw std::invalid_argument("perron_data requires an irreducible graph");
    SpectralData data;
    std::vector<std::pair<int, int>> edges(g.edges());
    data.lambda = detail::perron_root_local(g.vertex_count(), edges, &data.right);
    std::vector<std::pair<int, int>> redges;
    redges.reserve(edges.size());
    for (auto [u, v] : edges) redges.emplace_back(v, u);
    detail::perron_root_local(g.vertex_count(), redges, &data.left);

    double sum = 0.0;
    for (double x : data.right) sum += x;
    for (double& x : data.right) x /= sum;
    double dot = 0.0;
    for (int i = 0; i < g.vertex_count(); ++i) dot += data.left[i] * data.right[i];
    for (double& x : data.left) x /= dot;

    if (g.vertex_count() <= kCharPolyMaxVertices) {
        data.char_poly = char_poly(g);
        data.nonzero_spectrum = detail::nonzero_roots(data.char_poly);
        data.exact_available = true;
    }
    return data;
}

// det(I - tA) evaluated exactly from the characteristic polynomial when
// the size cap allows, by dense LU otherwise.
inline double zeta_denominator(const Graph& g, double t) {
    const int n = g.vertex_count();
    if (n == 0) return 1.0;
    if (n <= kCharPolyMaxVertices) {
        std::vector<BigInt> poly = char_poly(g);
        // det(I - tA) = sum_k c_k t^(n-k)
        double det = 0.0;
        for (int k = n; k >= 0; --k) det = det * t + poly[k].convert_to<double>();
        return det;
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (int e = 0; e < g.edge_count(); ++e) m(g.edge_from(e), g.edge_to(e)) -= t;
    return m.partialPivLu().determinant();
}

// zeta_G(t) = 1/det(I - tA); +infinity at or beyond the radius of
// convergence 1/lambda (and whenever the determinant is nonpositive).
inline double zeta_eval(const Graph& g, double t) {
    if (t < 0) throw std::invalid_argument("zeta argument must be nonnegative");
    double lambda = spectral_radius(g);
    if (t * lambda >= 1.0 - 1e-12 && lambda > 0)
        return std::numeric_limits<double>::infinity();
    double det = zeta_denominator(g, t);
    if (det <= 0) return std::numeric_limits<double>::infinity();
    return 1.0 / det;
}

namespace detail {

// Upper bound on sum_{p > p_from} c_p x^p/(1-x^p), the log-scale error
// of truncating an orbit product at p_from. Exact counts are used up to
// a horizon; beyond it c_p <= |V| lambda^p / p (a Perron bound). For
// lambda <= 1 every orbit has period <= |V|, so the tail past |V| is
// exactly zero.
inline double orbit_tail_bound(const Graph& g, double lambda, double x, int p_from) {
    if (x <= 0) return 0.0;
    const int nv = g.vertex_count();
    double tail = 0.0;
    int horizon = p_from;
    if (lambda <= 1.0 + 1e-9) {
        horizon = std::max(p_from, nv);
    } else {
        horizon = std::max(p_from, std::min(2 * nv, 256));
    }
    if (horizon > p_from) {
        OrbitCensus census = orbit_census(g, horizon);
        for (int p = p_from + 1; p <= horizon; ++p) {
            double c = census.counts[p].convert_to<double>();
            if (c == 0.0) continue;
            double xp = std::pow(x, p);
            tail += c * xp / (1.0 - xp);
        }
    }
    if (lambda > 1.0 + 1e-9) {
        double lam = lambda * (1.0 + 1e-8);  // margin over the float Perron root
        double q = x * lam;
        if (q >= 1.0) return std::numeric_limits<double>::infinity();
        double xh = std::pow(x, horizon + 1);
        tail += nv * std::pow(q, horizon + 1) / ((horizon + 1) * (1.0 - xh) * (1.0 - q));
    }
    return tail;
}

}  // namespace detail

// Truncated Euler product for 1/zeta: value = prod_{p <= p_max}
// (1-t^p)^(c_p), and a rigorous bound B on the omitted log-mass, so the
// true 1/zeta lies in [value*exp(-B), value].
struct ZetaProduct {
    double value = 1.0;
    double tail_bound = 0.0;
    double lower() const { return value * std::exp(-tail_bound); }
    double upper() const { return value; }
};

inline ZetaProduct zeta_product_truncated(const Graph& g, double t, int p_max) {
    if (t < 0) throw std::invalid_argument("zeta argument must be nonnegative");
    if (p_max < 1) throw std::invalid_argument("p_max must be positive");
    double lambda = spectral_radius(g);
    if (lambda > 0 && t * lambda >= 1.0)
        throw std::invalid_argument("zeta product requires t < 1/lambda");
    ZetaProduct result;
    if (t == 0.0) return result;
    OrbitCensus census = orbit_census(g, p_max);
    double log_value = 0.0;
    for (int p = 1; p <= p_max; ++p) {
        double c = census.counts[p].convert_to<double>();
        if (c == 0.0) continue;
        log_value += c * std::log1p(-std::pow(t, p));
    }
    result.value = std::exp(log_value);
    result.tail_bound = detail::orbit_tail_bound(g, lambda, t, p_max);
    return result;
}

// ---------------------------------------------------------------------------
// Parry measure

struct ParryMeasure {
    const Graph* graph = nullptr;
    SpectralData spectral;
    std::vector<double> vertex_mass;  // mu(u) = w_u v_u
    std::vector<double> edge_mass;    // mu(e) = w_{i(e)} lambda^-1 v_{t(e)}
};

inline ParryMeasure parry_measure(const Graph& g) {
    ParryMeasure m;
    m.graph = &g;
    m.spectral = perron_data(g);
    m.vertex_mass.resize(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v)
        m.vertex_mass[v] = m.spectral.left[v] * m.spectral.right[v];
    m.edge_mass.resize(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e)
        m.edge_mass[e] = m.spectral.left[g.edge_from(e)] * m.spectral.right[g.edge_to(e)] /
                         m.spectral.lambda;
    return m;
}

// mu(b) = w_{i(b_1)} lambda^{-n} v_{t(b_n)} for a path of n edges.
inline double measure_of_path(const ParryMeasure& m, std::span<const int> path_edges) {
    const Graph& g = *m.graph;
    if (path_edges.empty()) throw std::invalid_argument("path must contain at least one edge");
    for (std::size_t i = 0; i + 1 < path_edges.size(); ++i)
        if (g.edge_to(path_edges[i]) != g.edge_from(path_edges[i + 1]))
            throw std::invalid_argument("edges do not compose into a path");
    double lam_pow = std::pow(m.spectral.lambda, -static_cast<double>(path_edges.size()));
    return m.spectral.left[g.edge_from(path_edges.front())] * lam_pow *
           m.spectral.right[g.edge_to(path_edges.back())];
}

// ---------------------------------------------------------------------------
// Entropy

struct EntropyResult {
    bool empty = true;   // the shift carries no bi-infinite walk
    double beta = 0.0;   // spectral radius of the essential subgraph
    double entropy = 0.0;
};

inline EntropyResult entropy(const Graph& g) {
    EntropyResult result;
    Graph core = essential_subgraph(g);
    if (core.vertex_count() == 0) return result;
    result.empty = false;
    result.beta = spectral_radius(core);
    result.entropy = result.beta >= 1.0 ? std::log(result.beta) : 0.0;
    return result;
}

inline double beta(const Graph& g) { return entropy(g).beta; }

}  // namespace sft
