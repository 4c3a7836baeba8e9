#pragma once

// Finite directed graphs with 0/1 adjacency and a canonical edge order,
// plus the derived constructions everything else is built on: n-block
// graphs, power graphs, transposes, essential subgraphs, SCC
// decomposition, and path / periodic-walk enumeration.
//
// Vertices are dense integer indices 0..n-1. Edges carry a canonical
// index (lexicographic by (u,v)) that is used everywhere downstream:
// sampling masks, labels, and file formats all refer to it.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sft/common.hpp"

namespace sft {

class Graph {
public:
    Graph() = default;

    // Deduplicates and sorts edges into canonical (u,v) order. Duplicate
    // edges are dropped with a note appended to `warnings` when given;
    // out-of-range endpoints throw std::invalid_argument.
    static Graph build(int vertex_count,
                       std::vector<std::pair<int, int>> edge_list,
                       std::vector<std::string>* warnings = nullptr,
                       std::vector<std::string> labels = {}) {
        if (vertex_count < 0) throw std::invalid_argument("vertex_count must be nonnegative");
        if (!labels.empty() && labels.size() != edge_list.size())
            throw std::invalid_argument("edge labels must align with the edge list");
        for (const auto& [u, v] : edge_list) {
            if (u < 0 || u >= vertex_count || v < 0 || v >= vertex_count)
                throw std::invalid_argument("edge endpoint (" + std::to_string(u) + "," +
                                            std::to_string(v) + ") out of range for " +
                                            std::to_string(vertex_count) + " vertices");
        }
        std::vector<int> order(edge_list.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return edge_list[a] < edge_list[b]; });

        Graph g;
        g.vertex_count_ = vertex_count;
        for (int idx : order) {
            if (!g.edges_.empty() && g.edges_.back() == edge_list[idx]) {
                if (warnings)
                    warnings->push_back("duplicate edge (" + std::to_string(edge_list[idx].first) +
                                        "," + std::to_string(edge_list[idx].second) + ") dropped");
                continue;
            }
            g.edges_.push_back(edge_list[idx]);
            if (!labels.empty()) g.labels_.push_back(labels[idx]);
        }
        g.build_incidence();
        return g;
    }

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    std::pair<int, int> edge(int e) const { return edges_[e]; }
    int edge_from(int e) const { return edges_[e].first; }
    int edge_to(int e) const { return edges_[e].second; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    // Edge indices leaving / entering a vertex, ascending.
    const std::vector<int>& out_edges(int v) const { return out_edges_[v]; }
    const std::vector<int>& in_edges(int v) const { return in_edges_[v]; }
    int out_degree(int v) const { return static_cast<int>(out_edges_[v].size()); }
    int in_degree(int v) const { return static_cast<int>(in_edges_[v].size()); }

    // -1 when absent.
    int edge_index(int u, int v) const {
        const auto& outs = out_edges_[u];
        auto it = std::lower_bound(outs.begin(), outs.end(), v,
                                   [&](int e, int target) { return edges_[e].second < target; });
        if (it != outs.end() && edges_[*it].second == v) return *it;
        return -1;
    }

    bool has_labels() const { return !labels_.empty(); }
    const std::string& label(int e) const { return labels_[e]; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    void build_incidence() {
        out_edges_.assign(vertex_count_, {});
        in_edges_.assign(vertex_count_, {});
        for (int e = 0; e < edge_count(); ++e) {
            out_edges_[edges_[e].first].push_back(e);
            in_edges_[edges_[e].second].push_back(e);
        }
    }

    int vertex_count_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::string> labels_;
    std::vector<std::vector<int>> out_edges_;
    std::vector<std::vector<int>> in_edges_;
};

// ---------------------------------------------------------------------------
// Built-in generators

inline Graph make_golden() {
    return Graph::build(2, {{0, 0}, {0, 1}, {1, 0}});
}

// Full shift on `symbols` symbols presented as the complete graph with
// self-loops on `symbols` vertices.
inline Graph make_full_shift(int symbols) {
    if (symbols < 1) throw std::invalid_argument("full shift needs at least one symbol");
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < symbols; ++u)
        for (int v = 0; v < symbols; ++v) edges.emplace_back(u, v);
    return Graph::build(symbols, std::move(edges));
}

inline Graph make_cycle(int length) {
    if (length < 1) throw std::invalid_argument("cycle length must be positive");
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < length; ++u) edges.emplace_back(u, (u + 1) % length);
    return Graph::build(length, std::move(edges));
}

// ---------------------------------------------------------------------------
// SCC decomposition (iterative Tarjan, optionally restricted to a mask of
// allowed edges; the sampling hot path reuses the same routine).

namespace detail {

struct SccWorkspace {
    std::vector<int> index, lowlink;
    std::vector<std::uint8_t> on_stack;
    std::vector<int> stack;
    std::vector<std::pair<int, int>> dfs;  // (vertex, next out-edge position)
};

// Assigns a component id to every vertex (trivial ones included) and
// returns the component count. Ids are in reverse topological order.
inline int scc_assign(const Graph& g, std::span<const std::uint8_t> allowed,
                      std::vector<int>& comp, SccWorkspace* ws = nullptr) {
    const int n = g.vertex_count();
    SccWorkspace local;
    SccWorkspace& w = ws ? *ws : local;
    comp.assign(n, -1);
    w.index.assign(n, -1);
    w.lowlink.assign(n, 0);
    w.on_stack.assign(n, 0);
    w.stack.clear();
    w.dfs.clear();

    int next_index = 0;
    int comp_count = 0;
    for (int root = 0; root < n; ++root) {
        if (w.index[root] != -1) continue;
        w.dfs.emplace_back(root, 0);
        while (!w.dfs.empty()) {
            int v = w.dfs.back().first;
            if (w.dfs.back().second == 0) {
                w.index[v] = w.lowlink[v] = next_index++;
                w.stack.push_back(v);
                w.on_stack[v] = 1;
            }
            bool descended = false;
            const auto& outs = g.out_edges(v);
            while (w.dfs.back().second < static_cast<int>(outs.size())) {
                int e = outs[w.dfs.back().second++];
                if (!allowed.empty() && !allowed[e]) continue;
                int to = g.edge_to(e);
                if (w.index[to] == -1) {
                    w.dfs.emplace_back(to, 0);
                    descended = true;
                    break;
                }
                if (w.on_stack[to]) w.lowlink[v] = std::min(w.lowlink[v], w.index[to]);
            }
            if (descended) continue;
            if (w.lowlink[v] == w.index[v]) {
                while (true) {
                    int u = w.stack.back();
                    w.stack.pop_back();
                    w.on_stack[u] = 0;
                    comp[u] = comp_count;
                    if (u == v) break;
                }
                ++comp_count;
            }
            int low = w.lowlink[v];
            w.dfs.pop_back();
            if (!w.dfs.empty()) {
                int parent = w.dfs.back().first;
                w.lowlink[parent] = std::min(w.lowlink[parent], low);
            }
        }
    }
    return comp_count;
}

}  // namespace detail

// Nontrivial strongly connected components only: a component qualifies
// iff it contains at least one edge (a single vertex with a self-loop
// counts, an isolated vertex does not). Components are listed by their
// smallest vertex; vertex lists are sorted.
inline std::vector<std::vector<int>> scc_decompose(const Graph& g) {
    std::vector<int> comp;
    int count = detail::scc_assign(g, {}, comp);
    std::vector<char> nontrivial(count, 0);
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edge(e);
        if (comp[u] == comp[v]) nontrivial[comp[u]] = 1;
    }
    std::vector<std::vector<int>> members(count);
    for (int v = 0; v < g.vertex_count(); ++v) members[comp[v]].push_back(v);
    std::vector<std::vector<int>> result;
    for (int c = 0; c < count; ++c)
        if (nontrivial[c]) result.push_back(std::move(members[c]));
    std::sort(result.begin(), result.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return result;
}

// ---------------------------------------------------------------------------
// Basic derived graphs

inline Graph transpose(const Graph& g) {
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> labels;
    edges.reserve(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
        edges.emplace_back(g.edge_to(e), g.edge_from(e));
        if (g.has_labels()) labels.push_back(g.label(e));
    }
    return Graph::build(g.vertex_count(), std::move(edges), nullptr, std::move(labels));
}

// Iteratively deletes vertices with in-degree 0 or out-degree 0 until a
// fixpoint; the result is compacted to dense indices. Empty iff g has no
// cycle; the spectral radius is unchanged.
inline Graph essential_subgraph(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<char> alive(n, 1);
    std::vector<int> out_deg(n), in_deg(n);
    for (int v = 0; v < n; ++v) {
        out_deg[v] = g.out_degree(v);
        in_deg[v] = g.in_degree(v);
    }
    std::vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (out_deg[v] == 0 || in_deg[v] == 0) queue.push_back(v);
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        if (!alive[v]) continue;
        alive[v] = 0;
        for (int e : g.out_edges(v)) {
            int to = g.edge_to(e);
            if (alive[to] && --in_deg[to] == 0) queue.push_back(to);
        }
        for (int e : g.in_edges(v)) {
            int from = g.edge_from(e);
            if (alive[from] && --out_deg[from] == 0) queue.push_back(from);
        }
    }
    std::vector<int> remap(n, -1);
    int kept = 0;
    for (int v = 0; v < n; ++v)
        if (alive[v]) remap[v] = kept++;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> labels;
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edge(e);
        if (alive[u] && alive[v]) {
            edges.emplace_back(remap[u], remap[v]);
            if (g.has_labels()) labels.push_back(g.label(e));
        }
    }
    return Graph::build(kept, std::move(edges), nullptr, std::move(labels));
}

namespace detail {

// Period of one strongly connected component given as a vertex list,
// via BFS levels: gcd over internal edges (u,v) of level[u]+1-level[v].
inline int component_period(const Graph& g, const std::vector<int>& members,
                            const std::vector<int>& comp, int comp_id,
                            std::span<const std::uint8_t> allowed = {}) {
    std::vector<int> level(g.vertex_count(), -1);
    std::vector<int> bfs;
    bfs.push_back(members.front());
    level[members.front()] = 0;
    for (std::size_t head = 0; head < bfs.size(); ++head) {
        int v = bfs[head];
        for (int e : g.out_edges(v)) {
            if (!allowed.empty() && !allowed[e]) continue;
            int to = g.edge_to(e);
            if (comp[to] != comp_id) continue;
            if (level[to] == -1) {
                level[to] = level[v] + 1;
                bfs.push_back(to);
            }
        }
    }
    std::int64_t d = 0;
    for (int v : members) {
        for (int e : g.out_edges(v)) {
            if (!allowed.empty() && !allowed[e]) continue;
            int to = g.edge_to(e);
            if (comp[to] != comp_id) continue;
            d = std::gcd(d, static_cast<std::int64_t>(level[v]) + 1 - level[to]);
        }
    }
    return static_cast<int>(d < 0 ? -d : d);
}

}  // namespace detail

// gcd of the lengths of all cycles; nullopt for an acyclic graph.
inline std::optional<int> period(const Graph& g) {
    auto comps = scc_decompose(g);
    if (comps.empty()) return std::nullopt;
    std::vector<int> comp;
    detail::scc_assign(g, {}, comp);
    std::int64_t d = 0;
    for (const auto& members : comps)
        d = std::gcd(d, static_cast<std::int64_t>(detail::component_period(
                            g, members, comp, comp[members.front()])));
    return static_cast<int>(d);
}

inline bool is_irreducible(const Graph& g) {
    if (g.vertex_count() == 0) return false;
    auto comps = scc_decompose(g);
    return comps.size() == 1 && static_cast<int>(comps.front().size()) == g.vertex_count();
}

inline bool is_primitive(const Graph& g) {
    if (!is_irreducible(g)) return false;
    auto p = period(g);
    return p && *p == 1;
}

// ---------------------------------------------------------------------------
// Path and periodic-walk enumeration

struct PathSet {
    int length = 0;
    std::vector<int> starts;              // start vertex per path
    std::vector<std::vector<int>> paths;  // edge-index sequences, lexicographic
};

// All walks of length k, in lexicographic edge-index order. k = 0 yields
// one empty path per vertex. Throws CapExceeded past `cap` paths.
inline PathSet enumerate_paths(const Graph& g, int k, std::int64_t cap = kDefaultEnumCap) {
    if (k < 0) throw std::invalid_argument("path length must be nonnegative");
    PathSet result;
    result.length = k;
    if (k == 0) {
        if (g.vertex_count() > cap) throw CapExceeded("path enumeration cap " + std::to_string(cap) + " exceeded");
        for (int v = 0; v < g.vertex_count(); ++v) {
            result.starts.push_back(v);
            result.paths.push_back({});
        }
        return result;
    }
    std::vector<int> walk;
    for (int start = 0; start < g.vertex_count(); ++start) {
        // depth-first over out-edges in ascending index order
        struct Frame { int vertex; std::size_t pos; };
        std::vector<Frame> stack{{start, 0}};
        walk.clear();
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& outs = g.out_edges(f.vertex);
            if (static_cast<int>(stack.size()) - 1 == k || f.pos >= outs.size()) {
                if (static_cast<int>(stack.size()) - 1 == k) {
                    if (static_cast<std::int64_t>(result.paths.size()) >= cap)
                        throw CapExceeded("path enumeration cap " + std::to_string(cap) + " exceeded");
                    result.starts.push_back(start);
                    result.paths.push_back(walk);
                }
                stack.pop_back();
                if (!walk.empty()) walk.pop_back();
                continue;
            }
            int e = outs[f.pos++];
            walk.push_back(e);
            stack.push_back({g.edge_to(e), 0});
        }
    }
    return result;
}

struct OrbitSet {
    int period = 0;
    std::vector<std::vector<int>> reps;  // rotation-minimal representative per class
    std::vector<int> class_sizes;        // number of distinct rotations in the class
    std::uint64_t total_walks = 0;       // equals trace(A^p)
};

namespace detail {

// Smallest d dividing the cyclic structure with seq rotated by d equal to
// itself; d == seq.size() for a primitive cyclic word.
inline int cyclic_primitive_period(const std::vector<int>& seq) {
    const int p = static_cast<int>(seq.size());
    for (int d = 1; d < p; ++d) {
        if (p % d != 0) continue;
        bool ok = true;
        for (int i = 0; i < p && ok; ++i) ok = seq[i] == seq[(i + d) % p];
        if (ok) return d;
    }
    return p;
}

inline std::vector<int> minimal_rotation(const std::vector<int>& seq) {
    const int p = static_cast<int>(seq.size());
    std::vector<int> best = seq, cur(p);
    for (int r = 1; r < p; ++r) {
        for (int i = 0; i < p; ++i) cur[i] = seq[(i + r) % p];
        if (cur < best) best = cur;
    }
    return best;
}

}  // namespace detail

// All closed walks of length p grouped into rotation classes. The total
// walk count equals trace(A^p); classes are keyed by their rotation-
// minimal representative.
inline OrbitSet enumerate_periodic(const Graph& g, int p, std::int64_t cap = kDefaultEnumCap) {
    if (p < 1) throw std::invalid_argument("period must be positive");
    OrbitSet result;
    result.period = p;
    std::map<std::vector<int>, int> classes;
    std::int64_t walks = 0;

    // distance back to the start vertex, for pruning
    std::vector<int> dist_to_start(g.vertex_count());
    std::vector<int> walk;
    for (int start = 0; start < g.vertex_count(); ++start) {
        std::fill(dist_to_start.begin(), dist_to_start.end(), -1);
        std::vector<int> bfs{start};
        dist_to_start[start] = 0;
        for (std::size_t head = 0; head < bfs.size(); ++head) {
            for (int e : g.in_edges(bfs[head])) {
                int from = g.edge_from(e);
                if (dist_to_start[from] == -1) {
                    dist_to_start[from] = dist_to_start[bfs[head]] + 1;
                    bfs.push_back(from);
                }
            }
        }
        struct Frame { int vertex; std::size_t pos; };
        std::vector<Frame> stack{{start, 0}};
        walk.clear();
        while (!stack.empty()) {
            Frame& f = stack.back();
            int depth = static_cast<int>(stack.size()) - 1;
            if (depth == p) {
                if (f.vertex == start) {
                    if (++walks > cap)
                        throw CapExceeded("periodic walk cap " + std::to_string(cap) + " exceeded");
                    ++classes[detail::minimal_rotation(walk)];
                }
                stack.pop_back();
                walk.pop_back();
                continue;
            }
            const auto& outs = g.out_edges(f.vertex);
            bool descended = false;
            while (f.pos < outs.size()) {
                int e = outs[f.pos++];
                int to = g.edge_to(e);
                if (dist_to_start[to] == -1 || dist_to_start[to] > p - depth - 1) continue;
                walk.push_back(e);
                stack.push_back({to, 0});
                descended = true;
                break;
            }
            if (!descended) {
                stack.pop_back();
                if (!walk.empty() && depth > 0) walk.pop_back();
            }
        }
    }
    result.total_walks = static_cast<std::uint64_t>(walks);
    for (auto& [rep, count] : classes) {
        result.reps.push_back(rep);
        result.class_sizes.push_back(count);
    }
    return result;
}

// ---------------------------------------------------------------------------
// n-block and power graphs

// Vertices of the result are the paths of length n-1, edges the paths of
// length n; i(e) and t(e) are the length-(n-1) prefix and suffix. Edge
// labels record the underlying base path as dot-joined edge indices.
inline Graph n_block_graph(const Graph& g, int n, std::int64_t edge_cap = kDefaultEnumCap) {
    if (n < 1) throw std::invalid_argument("block length must be positive");
    PathSet vertices = enumerate_paths(g, n - 1, edge_cap);
    PathSet edge_paths = enumerate_paths(g, n, edge_cap);

    std::map<std::pair<int, std::vector<int>>, int> vertex_id;
    for (std::size_t i = 0; i < vertices.paths.size(); ++i)
        vertex_id[{vertices.starts[i], vertices.paths[i]}] = static_cast<int>(i);

    auto label_of = [&](const std::vector<int>& path) {
        std::string s;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i) s += '.';
            s += std::to_string(path[i]);
        }
        return s;
    };

    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < edge_paths.paths.size(); ++i) {
        const auto& path = edge_paths.paths[i];
        std::vector<int> prefix(path.begin(), path.end() - 1);
        std::vector<int> suffix(path.begin() + 1, path.end());
        int suffix_start = n == 1 ? g.edge_to(path[0]) : g.edge_from(path[1]);
        int u = vertex_id.at({edge_paths.starts[i], prefix});
        int v = vertex_id.at({suffix_start, suffix});
        edges.emplace_back(u, v);
        labels.push_back(label_of(path));
    }
    return Graph::build(static_cast<int>(vertices.paths.size()), std::move(edges), nullptr,
                        std::move(labels));
}

// Integer adjacency with multiplicities: entry (u,v) counts the paths of
// length p from u to v. Only the p-th power graph may carry counts > 1.
struct MultiGraph {
    int vertex_count = 0;
    std::vector<std::vector<std::uint64_t>> counts;
};

inline MultiGraph power_graph(const Graph& g, int p) {
    if (p < 1) throw std::invalid_argument("power must be positive");
    const int n = g.vertex_count();
    MultiGraph result;
    result.vertex_count = n;
    std::vector<std::vector<std::uint64_t>> m(n, std::vector<std::uint64_t>(n, 0));
    for (int e = 0; e < g.edge_count(); ++e) m[g.edge_from(e)][g.edge_to(e)] = 1;
    auto multiply = [&](const auto& a, const auto& b) {
        std::vector<std::vector<std::uint64_t>> c(n, std::vector<std::uint64_t>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                std::uint64_t aik = a[i][k];
                if (!aik) continue;
                for (int j = 0; j < n; ++j) {
                    std::uint64_t prod;
                    if (__builtin_mul_overflow(aik, b[k][j], &prod) ||
                        __builtin_add_overflow(c[i][j], prod, &c[i][j]))
                        throw CapExceeded("power graph multiplicity overflow");
                }
            }
        return c;
    };
    auto acc = m;
    for (int step = 1; step < p; ++step) acc = multiply(acc, m);
    result.counts = std::move(acc);
    return result;
}

}  // namespace sft
