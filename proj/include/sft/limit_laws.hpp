#pragma once

// Analytic reference values the simulations are checked against:
// (zeta(alpha))^-1, the emptiness sandwich bounds, orbit counts, the
// I_infinity PMF, and the limiting entropy log(alpha*lambda).

#include <cmath>
#include <limits>
#include <vector>

#include "sft/common.hpp"
#include "sft/exact.hpp"
#include "sft/graph.hpp"
#include "sft/spectral.hpp"

namespace sft {

// Orbit census: traces N_p = tr(A^p) and least-period orbit counts c_p
// with N_p = sum_{d|p} d c_d, all exact integers.
inline OrbitCensus orbit_counts(const Graph& g, int p_max) { return orbit_census(g, p_max); }

// Limiting emptiness probability: det(I - alpha A) below the critical
// threshold, 0 at and above it.
inline double zeta_inverse(const Graph& g, double alpha) {
    if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
    double lambda = spectral_radius(g);
    if (lambda > 0 && alpha * lambda >= 1.0 - 1e-12) return 0.0;
    return zeta_denominator(g, alpha);
}

struct EmptinessBounds {
    double lower = 1.0;
    double upper = 1.0;
    int lower_p_exact = 0;           // orbit periods entered with exact counts
    bool lower_tail_extended = false;  // a rigorous tail factor extended the product
    std::int64_t z_used = 0;
    bool z_at_cap = false;
};

// Sandwich bounds on P(X_omega empty):
//   prod_{p <= |E|} (1-alpha^p)^{c_p}  <=  P  <=  prod_{p <= z} (1-alpha^p)^{c_p}.
// The upper product may use any verified lower estimate of z (fewer
// factors only weaken it); the lower product may be extended past the
// exact census with a tail factor exp(-S), S an upper bound on the
// omitted log-mass, which only deepens it.
inline EmptinessBounds emptiness_bounds_from(const OrbitCensus& census, const Graph& tail_graph,
                                             double lambda, double alpha, CappedInt z,
                                             int edge_count) {
    if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
    EmptinessBounds b;
    b.z_used = z.value;
    b.z_at_cap = z.at_cap;
    if (alpha == 0 || edge_count == 0) return b;

    const int exact_h = std::min(census.p_max, edge_count);
    b.lower_p_exact = exact_h;
    double log_lower = 0.0;
    for (int p = 1; p <= exact_h; ++p) {
        double c = census.counts[p].convert_to<double>();
        if (c == 0.0) continue;
        double ap = std::pow(alpha, p);
        log_lower += c * std::log1p(-ap);
        if (log_lower < -800.0) break;
    }
    if (exact_h < edge_count) {
        b.lower_tail_extended = true;
        log_lower -= detail::orbit_tail_bound(tail_graph, lambda, alpha, exact_h);
    }
    b.lower = std::isfinite(log_lower) ? std::exp(log_lower) : 0.0;

    const std::int64_t z_h = std::min<std::int64_t>(z.value, exact_h);
    double log_upper = 0.0;
    for (int p = 1; p <= z_h; ++p) {
        double c = census.counts[p].convert_to<double>();
        if (c == 0.0) continue;
        log_upper += c * std::log1p(-std::pow(alpha, p));
    }
    b.upper = std::exp(log_upper);
    return b;
}

inline EmptinessBounds emptiness_bounds(const Graph& g, double alpha, int z_cap = 12,
                                        std::int64_t enum_cap = kDefaultEnumCap) {
    if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
    if (g.edge_count() == 0) return {};
    double lambda = spectral_radius(g);
    CappedInt z = compute_z(g, z_cap, enum_cap);
    int horizon = std::min(g.edge_count(), 128);
    // keep the exact census affordable on large graphs; the tail factor
    // covers whatever is cut off
    double cost = static_cast<double>(g.vertex_count()) * g.edge_count() * horizon;
    if (cost > 2e8)
        horizon = std::max<int>(1, static_cast<int>(2e8 / (static_cast<double>(g.vertex_count()) *
                                                           g.edge_count())));
    OrbitCensus census = orbit_census(g, horizon);
    return emptiness_bounds_from(census, g, lambda, alpha, z, g.edge_count());
}

struct IInfinityPMF {
    double alpha = 0.0;
    std::vector<double> probabilities;  // k = 0..k_max
    double tail_bound = 0.0;            // sum(probabilities) + tail_bound covers 1
    int p_max_used = 0;
};

// Distribution of the limiting component count I_infinity. The sum over
// k-subsets of orbits is computed as the degree-k_max truncation of the
// product over periods p of (1 + x alpha^p/(1-alpha^p))^(c_p); distinct
// orbits of equal period contribute identical factors. p_max is chosen
// so the omitted orbit mass is below eps; the reported tail_bound
// additionally covers the k-truncation (it is exactly the probability
// mass the truncated entries fail to reach).
inline IInfinityPMF i_infinity_pmf(const Graph& g, double alpha, int k_max, double eps) {
    if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
    if (k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    double lambda = spectral_radius(g);
    if (lambda > 0 && alpha * lambda >= 1.0)
        throw std::invalid_argument("I_infinity requires the subcritical regime alpha < 1/lambda");

    IInfinityPMF result;
    result.alpha = alpha;

    int p_max = std::max(4, std::min(g.vertex_count(), 64));
    while (detail::orbit_tail_bound(g, lambda, alpha, p_max) > eps) {
        p_max *= 2;
        if (p_max > 4096)
            throw CapExceeded("orbit tail does not reach eps within p_max 4096");
    }
    result.p_max_used = p_max;

    OrbitCensus census = orbit_census(g, p_max);
    std::vector<double> coef(k_max + 1, 0.0), factor(k_max + 1, 0.0), next(k_max + 1, 0.0);
    coef[0] = 1.0;
    for (int p = 1; p <= p_max; ++p) {
        double c = census.counts[p].convert_to<double>();
        if (c == 0.0) continue;
        double ap = std::pow(alpha, p);
        double odds = ap / (1.0 - ap);
        // truncated binomial series of (1 + x*odds)^c
        factor[0] = 1.0;
        int deg = 0;
        for (int j = 1; j <= k_max; ++j) {
            factor[j] = factor[j - 1] * ((c - j + 1) * odds / j);
            if (factor[j] <= 0.0) break;
            deg = j;
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (int a = 0; a <= k_max; ++a) {
            if (coef[a] == 0.0) continue;
            for (int bdeg = 0; bdeg <= deg && a + bdeg <= k_max; ++bdeg)
                next[a + bdeg] += coef[a] * factor[bdeg];
        }
        coef.swap(next);
    }

    double zinv = zeta_inverse(g, alpha);
    double total = 0.0;
    result.probabilities.resize(k_max + 1);
    for (int k = 0; k <= k_max; ++k) {
        result.probabilities[k] = zinv * coef[k];
        total += result.probabilities[k];
    }
    result.tail_bound = std::max(0.0, 1.0 - total);
    return result;
}

struct LimitEntropy {
    double beta_limit = 0.0;    // alpha * lambda
    double entropy_limit = 0.0; // log(alpha * lambda)
};

inline LimitEntropy limit_entropy(double alpha, const Graph& g) {
    if (alpha < 0 || alpha > 1) throw std::invalid_argument("alpha must lie in [0,1]");
    double lambda = spectral_radius(g);
    if (lambda <= 0 || alpha * lambda <= 1.0)
        throw std::invalid_argument("limit entropy requires the supercritical regime alpha > 1/lambda");
    return {alpha * lambda, std::log(alpha * lambda)};
}

}  // namespace sft
