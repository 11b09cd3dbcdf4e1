#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "shapevis/community.hpp"
#include "shapevis/types.hpp"

namespace shapevis {

/// Per-edge modularity contribution dQ = w/(2m) - d_u*d_v/(2m)^2, with
/// degrees counting self weights twice and m the total weight of the graph.
struct EdgeModularity {
    NodeId u = 0, v = 0;   // canonical u < v
    double weight = 0.0;
    double delta_q = 0.0;
};

using EdgeModularityTable = std::vector<EdgeModularity>;

inline EdgeModularityTable edge_modularity(const InducedGraph& ig) {
    const double m = ig.graph.total_weight();
    if (m <= 0.0) throw std::invalid_argument("edge modularity undefined: graph has zero weight");
    const double m2 = 2.0 * m;
    const std::vector<double> deg = ig.graph.degrees();
    EdgeModularityTable table;
    table.reserve(ig.graph.edge_count());
    for (NodeId u = 0; u < ig.graph.node_count; ++u) {
        for (const Link& l : ig.graph.adj[u]) {
            if (u >= l.to) continue;
            const double dq = l.weight / m2 - deg[u] * deg[l.to] / (m2 * m2);
            table.push_back({u, l.to, l.weight, dq});
        }
    }
    return table;
}

namespace detail {

struct UnionFind {
    std::vector<NodeId> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), NodeId{0});
    }
    NodeId find(NodeId x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(NodeId a, NodeId b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent[b] = a;
        return true;
    }
};

// Descending dQ; equal values break toward the lexicographically smaller edge.
inline void sort_by_modularity(EdgeModularityTable& edges) {
    std::sort(edges.begin(), edges.end(), [](const EdgeModularity& a, const EdgeModularity& b) {
        if (a.delta_q != b.delta_q) return a.delta_q > b.delta_q;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });
}

} // namespace detail

struct SpanningResult {
    EdgeModularityTable accepted;    // E_1, in acceptance order
    EdgeModularityTable discarded;   // S = E_p \ E_1, descending dQ
};

/// First tearing phase: pop edges in descending modularity, keep an edge only
/// if it joins two components, stop once the accepted graph has as many
/// components as the induced graph. The result spans every node; the accepted
/// set is a forest per component.
inline SpanningResult spanning_phase(const InducedGraph& ig, const EdgeModularityTable& table) {
    const std::size_t n = ig.graph.node_count;
    EdgeModularityTable ordered = table;
    detail::sort_by_modularity(ordered);

    const std::size_t target_components = component_count(ig.graph);
    std::size_t components = n;
    detail::UnionFind uf(n);
    SpanningResult result;
    result.accepted.reserve(n);
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const EdgeModularity& e = ordered[i];
        if (components > target_components && uf.unite(e.u, e.v)) {
            result.accepted.push_back(e);
            --components;
        } else {
            result.discarded.push_back(e);
        }
    }
    return result;
}

/// Second tearing phase: walk the discarded edges in descending modularity
/// and reinstate an edge when the loop it would close meets the threshold.
/// The loop is the edge plus the minimum-hop path between its endpoints in
/// the current graph (BFS, ties toward the smaller next node id); its score
/// is the sum of edge modularities along the cycle. Reinstated edges join
/// the graph immediately and are visible to later path searches.
inline SummaryGraph reintroduce_loops(const InducedGraph& ig, const SpanningResult& spanning,
                                      double threshold) {
    const std::size_t n = ig.graph.node_count;

    // Working adjacency with per-edge dQ, seeded with the spanning forest.
    std::vector<std::vector<std::pair<NodeId, double>>> adj(n);
    auto connect = [&](const EdgeModularity& e) {
        auto insert = [&](NodeId from, NodeId to, double dq) {
            auto& list = adj[from];
            auto it = std::lower_bound(list.begin(), list.end(), to,
                                       [](const auto& a, NodeId b) { return a.first < b; });
            list.insert(it, {to, dq});
        };
        insert(e.u, e.v, e.delta_q);
        insert(e.v, e.u, e.delta_q);
    };
    for (const EdgeModularity& e : spanning.accepted) connect(e);

    SummaryGraph summary;
    summary.node_count = n;
    summary.nodes = ig.nodes;
    for (const EdgeModularity& e : spanning.accepted)
        summary.edges.push_back({e.u, e.v, e.weight, e.delta_q, EdgePhase::spanning});

    EdgeModularityTable pending = spanning.discarded;
    detail::sort_by_modularity(pending);

    std::vector<NodeId> parent(n), queue_buf(n);
    std::vector<double> parent_dq(n);
    std::vector<char> seen(n, 0);
    const NodeId unset = std::numeric_limits<NodeId>::max();

    for (const EdgeModularity& e : pending) {
        bool accept;
        if (threshold == -std::numeric_limits<double>::infinity()) {
            accept = true;   // every cycle qualifies
        } else {
            // BFS from u to v over the current graph.
            std::fill(seen.begin(), seen.end(), 0);
            std::size_t head = 0, tail = 0;
            queue_buf[tail++] = e.u;
            seen[e.u] = 1;
            parent[e.u] = unset;
            bool found = false;
            while (head < tail && !found) {
                const NodeId x = queue_buf[head++];
                for (const auto& [y, dq] : adj[x]) {
                    if (seen[y]) continue;
                    seen[y] = 1;
                    parent[y] = x;
                    parent_dq[y] = dq;
                    if (y == e.v) {
                        found = true;
                        break;
                    }
                    queue_buf[tail++] = y;
                }
            }
            if (!found)
                throw std::logic_error("tearing invariant violated: endpoints disconnected");
            double cycle_sum = e.delta_q;
            for (NodeId x = e.v; parent[x] != unset; x = parent[x]) cycle_sum += parent_dq[x];
            accept = cycle_sum >= threshold;
        }
        if (accept) {
            connect(e);
            summary.edges.push_back({e.u, e.v, e.weight, e.delta_q, EdgePhase::reintroduced});
        }
    }

    std::sort(summary.edges.begin(), summary.edges.end(),
              [](const SummaryEdge& a, const SummaryEdge& b) {
                  return a.u != b.u ? a.u < b.u : a.v < b.v;
              });
    return summary;
}

/// The default tearing threshold c = 2 ln(Q), with Q the modularity of the
/// chosen partition level evaluated on the landmark graph. Non-positive Q
/// has no logarithm; the threshold falls back to "reinstate all" with a
/// warning.
inline double default_threshold(double q, std::vector<std::string>* warnings = nullptr) {
    if (q <= 0.0) {
        detail::push_warning(warnings,
                             "modularity " + std::to_string(q) +
                                 " <= 0; tearing threshold falls back to reinstate-all");
        return -std::numeric_limits<double>::infinity();
    }
    return 2.0 * std::log(q);
}

inline double default_threshold(const WeightedGraph& landmark_graph, const Partition& part,
                                std::vector<std::string>* warnings = nullptr) {
    return default_threshold(modularity(landmark_graph, part, warnings), warnings);
}

/// Resolves the configured tearing mode to a threshold value.
inline double tearing_threshold(const PipelineConfig& cfg, double q_level,
                                std::vector<std::string>* warnings = nullptr) {
    switch (cfg.tearing) {
        case TearingMode::paper: return default_threshold(q_level, warnings);
        case TearingMode::fixed: return cfg.tearing_fixed_c;
        case TearingMode::all: return -std::numeric_limits<double>::infinity();
        default: return std::numeric_limits<double>::infinity();
    }
}

/// Convenience wrapper running both tearing phases.
inline SummaryGraph tear(const InducedGraph& ig, double threshold) {
    const EdgeModularityTable table = edge_modularity(ig);
    const SpanningResult spanning = spanning_phase(ig, table);
    return reintroduce_loops(ig, spanning, threshold);
}

} // namespace shapevis
