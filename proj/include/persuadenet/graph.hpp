#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "persuadenet/errors.hpp"
#include "persuadenet/linalg.hpp"

namespace persuadenet {

inline constexpr int kDefaultSetCap = 20;  // independent-set enumeration cap
inline constexpr int kMaxNodes = 31;       // adjacency rows are stored as bitmasks

/// Undirected simple graph on nodes 0..n-1.
///
/// Construction validates simplicity (no self loops, no duplicates, endpoints
/// in range). Neighborhoods are kept as bitmasks, which caps n at 31; every
/// enumeration herein is exponential in n anyway.
class Graph {
public:
    Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
        if (n < 1) throw ConfigError("graph needs at least one node");
        if (n > kMaxNodes) throw ConfigError("graph exceeds " + std::to_string(kMaxNodes) + " nodes");
        adj_.assign(static_cast<std::size_t>(n), 0u);
        for (auto& [u, v] : edges) {
            if (u > v) std::swap(u, v);
            if (u < 0 || v >= n) throw ConfigError("edge endpoint out of range");
            if (u == v) throw ConfigError("self loop on node " + std::to_string(u));
            const std::uint32_t bit_v = 1u << v;
            if (adj_[static_cast<std::size_t>(u)] & bit_v)
                throw ConfigError("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
            adj_[static_cast<std::size_t>(u)] |= bit_v;
            adj_[static_cast<std::size_t>(v)] |= 1u << u;
        }
        std::sort(edges.begin(), edges.end());
        edges_ = std::move(edges);
    }

    int node_count() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    std::uint32_t neighbors_mask(int k) const { return adj_[static_cast<std::size_t>(k)]; }
    std::uint32_t closed_neighborhood_mask(int k) const {
        return adj_[static_cast<std::size_t>(k)] | (1u << k);
    }
    bool has_edge(int u, int v) const { return (adj_[static_cast<std::size_t>(u)] >> v) & 1u; }
    int degree(int k) const { return std::popcount(adj_[static_cast<std::size_t>(k)]); }

private:
    int n_;
    std::vector<std::uint32_t> adj_;
    std::vector<std::pair<int, int>> edges_;
};

/// Symmetric 0/1 adjacency matrix with zero diagonal.
inline std::vector<std::vector<int>> adjacency_matrix(const Graph& g) {
    const int n = g.node_count();
    std::vector<std::vector<int>> a(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (g.has_edge(i, j)) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
    return a;
}

// (A+I) as a dense matrix, the coefficient matrix of every equilibrium solve.
inline SquareMatrix closed_adjacency(const Graph& g) {
    const int n = g.node_count();
    SquareMatrix m(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        m(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = 1.0;
        for (int j = 0; j < n; ++j)
            if (g.has_edge(i, j)) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 1.0;
    }
    return m;
}

inline void check_set_cap(const Graph& g, int cap) {
    if (g.node_count() > cap)
        throw CapExceeded("graph has " + std::to_string(g.node_count()) +
                          " nodes, enumeration cap is " + std::to_string(cap));
}

namespace detail {
inline bool mask_independent(const Graph& g, std::uint32_t s) {
    for (std::uint32_t rest = s; rest;) {
        const int k = std::countr_zero(rest);
        rest &= rest - 1;
        if (g.neighbors_mask(k) & s) return false;
    }
    return true;
}

inline std::vector<int> mask_to_nodes(std::uint32_t s) {
    std::vector<int> out;
    for (std::uint32_t rest = s; rest;) {
        out.push_back(std::countr_zero(rest));
        rest &= rest - 1;
    }
    return out;
}
}  // namespace detail

/// All inclusion-maximal independent sets, as sorted node lists in ascending
/// mask order. Exhaustive subset scan; exact by construction.
inline std::vector<std::vector<int>> maximal_independent_sets(const Graph& g,
                                                              int cap = kDefaultSetCap) {
    check_set_cap(g, cap);
    const int n = g.node_count();
    std::vector<std::vector<int>> out;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        if (!detail::mask_independent(g, s)) continue;
        bool maximal = true;
        for (int k = 0; k < n && maximal; ++k)
            if (!((s >> k) & 1u) && !(g.neighbors_mask(k) & s)) maximal = false;
        if (maximal) out.push_back(detail::mask_to_nodes(s));
    }
    return out;
}

/// alpha(G): size of the maximum independent set.
inline int independence_number(const Graph& g, int cap = kDefaultSetCap) {
    check_set_cap(g, cap);
    const int n = g.node_count();
    int best = 0;
    for (std::uint32_t s = 0; s < (1u << n); ++s)
        if (detail::mask_independent(g, s)) best = std::max(best, std::popcount(s));
    return best;
}

struct NodeWeights {
    std::vector<double> w;
};

/// Maximum-weight independent set. Ties broken by the lexicographically
/// smallest node list so the output is deterministic.
inline std::pair<std::vector<int>, double> weighted_max_independent_set(
    const Graph& g, const NodeWeights& weights, int cap = kDefaultSetCap) {
    check_set_cap(g, cap);
    const int n = g.node_count();
    if (static_cast<int>(weights.w.size()) != n)
        throw ConfigError("weight vector length does not match node count");
    for (double w : weights.w)
        if (w < 0.0) throw ConfigError("node weights must be nonnegative");
    double best = 0.0;
    std::vector<int> best_nodes;  // empty set, weight 0
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
        if (!detail::mask_independent(g, s)) continue;
        double total = 0.0;
        for (std::uint32_t rest = s; rest;) {
            total += weights.w[static_cast<std::size_t>(std::countr_zero(rest))];
            rest &= rest - 1;
        }
        if (total > best) {
            best = total;
            best_nodes = detail::mask_to_nodes(s);
        } else if (total == best) {
            auto nodes = detail::mask_to_nodes(s);
            if (std::lexicographical_compare(nodes.begin(), nodes.end(), best_nodes.begin(),
                                             best_nodes.end()))
                best_nodes = std::move(nodes);
        }
    }
    return {best_nodes, best};
}

/// w_k = deg(k) + 1, the row sums of (A+I).
inline NodeWeights degree_plus_one_weights(const Graph& g) {
    NodeWeights out;
    out.w.reserve(static_cast<std::size_t>(g.node_count()));
    for (int k = 0; k < g.node_count(); ++k) out.w.push_back(static_cast<double>(g.degree(k) + 1));
    return out;
}

/// Twin reduction with bookkeeping: classes[i] lists the original nodes merged
/// into reduced node i.
struct TwinReduction {
    Graph graph;
    std::vector<std::vector<int>> classes;
};

/// Iteratively merges adjacent node pairs with identical closed neighborhoods,
/// always the lowest-index qualifying pair, until none remain.
inline TwinReduction twin_reduce_with_classes(const Graph& g) {
    int n = g.node_count();
    std::vector<std::uint32_t> closed(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) closed[static_cast<std::size_t>(k)] = g.closed_neighborhood_mask(k);
    std::vector<std::vector<int>> classes(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) classes[static_cast<std::size_t>(k)] = {k};

    for (;;) {
        int mu = -1, mv = -1;
        for (int u = 0; u < n && mu < 0; ++u)
            for (int v = u + 1; v < n; ++v) {
                const bool adjacent = (closed[static_cast<std::size_t>(u)] >> v) & 1u;
                if (adjacent && closed[static_cast<std::size_t>(u)] == closed[static_cast<std::size_t>(v)]) {
                    mu = u;
                    mv = v;
                    break;
                }
            }
        if (mu < 0) break;
        // delete node mv; surviving nodes keep relative order
        auto& cu = classes[static_cast<std::size_t>(mu)];
        auto& cv = classes[static_cast<std::size_t>(mv)];
        cu.insert(cu.end(), cv.begin(), cv.end());
        classes.erase(classes.begin() + mv);
        closed.erase(closed.begin() + mv);
        n -= 1;
        const std::uint32_t low = (1u << mv) - 1u;
        for (auto& mask : closed) {
            const std::uint32_t high = mask >> (mv + 1);
            mask = (mask & low) | (high << mv);
        }
    }

    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if ((closed[static_cast<std::size_t>(u)] >> v) & 1u) edges.emplace_back(u, v);
    for (auto& c : classes) std::sort(c.begin(), c.end());
    return TwinReduction{Graph(n, std::move(edges)), std::move(classes)};
}

inline Graph twin_reduce(const Graph& g) { return twin_reduce_with_classes(g).graph; }

/// m(G): the sum of all entries of (A+I)^{-1}, computed as the sum of the
/// solution of (A+I)x = 1. A singular (A+I) is retried on the twin-reduced
/// graph; failure there raises SingularAfterReduction.
inline double network_constant_m(const Graph& g) {
    const std::vector<double> ones(static_cast<std::size_t>(g.node_count()), 1.0);
    if (auto x = solve_integer_matrix(closed_adjacency(g), ones)) {
        double s = 0.0;
        for (double v : *x) s += v;
        return s;
    }
    const Graph reduced = twin_reduce(g);
    const std::vector<double> ones2(static_cast<std::size_t>(reduced.node_count()), 1.0);
    if (auto x = solve_integer_matrix(closed_adjacency(reduced), ones2)) {
        double s = 0.0;
        for (double v : *x) s += v;
        return s;
    }
    throw SingularAfterReduction("(A+I) is singular even after twin reduction");
}

// ---- generators ----

inline Graph path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph(n, std::move(e));
}

inline Graph cycle_graph(int n) {
    if (n < 3) throw ConfigError("cycle needs at least 3 nodes");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    e.emplace_back(0, n - 1);
    return Graph(n, std::move(e));
}

/// Star with center 0.
inline Graph star_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < n; ++i) e.emplace_back(0, i);
    return Graph(n, std::move(e));
}

inline Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph(n, std::move(e));
}

/// G(n, p) with a fixed 64-bit seed. Pairs are visited in lexicographic order
/// and each consumes exactly one draw, so a (n, p, seed) triple names one
/// graph forever.
inline Graph erdos_renyi_graph(int n, double p, std::uint64_t seed) {
    if (p < 0.0 || p > 1.0) throw ConfigError("edge probability must lie in [0,1]");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (u < p) e.emplace_back(i, j);
        }
    return Graph(n, std::move(e));
}

/// Parses the edge-list text format: one `u v` pair per line, `#` starts a
/// comment, blank lines ignored, 0-based indices. Node count defaults to the
/// largest endpoint plus one.
inline Graph parse_edge_list(std::istream& in, std::optional<int> n_hint = std::nullopt) {
    std::vector<std::pair<int, int>> edges;
    int max_node = -1;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u)) continue;  // blank or comment-only line
        if (!(ls >> v))
            throw ConfigError("edge list line " + std::to_string(lineno) + ": expected two node ids");
        long long extra;
        if (ls >> extra)
            throw ConfigError("edge list line " + std::to_string(lineno) + ": trailing tokens");
        if (u < 0 || v < 0 || u > kMaxNodes || v > kMaxNodes)
            throw ConfigError("edge list line " + std::to_string(lineno) + ": node id out of range");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        max_node = std::max(max_node, static_cast<int>(std::max(u, v)));
    }
    const int n = n_hint.value_or(max_node + 1);
    return Graph(n, std::move(edges));
}

inline Graph parse_edge_list(const std::string& text, std::optional<int> n_hint = std::nullopt) {
    std::istringstream in(text);
    return parse_edge_list(in, n_hint);
}

}  // namespace persuadenet
