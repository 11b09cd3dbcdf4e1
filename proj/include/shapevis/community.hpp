#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shapevis/rng.hpp"
#include "shapevis/types.hpp"

namespace shapevis {

/// Newman-Girvan weighted modularity Q = sum_c [in_c/(2m) - (tot_c/(2m))^2].
/// Self-loops count once toward the total weight and twice toward degrees.
/// A graph with zero total weight yields Q = 0 with a warning.
inline double modularity(const WeightedGraph& g, const Partition& part,
                         std::vector<std::string>* warnings = nullptr) {
    if (part.assignment.size() != g.node_count)
        throw std::invalid_argument("partition does not cover the graph");
    const double m = g.total_weight();
    if (m <= 0.0) {
        detail::push_warning(warnings, "modularity undefined on zero-weight graph; returning 0");
        return 0.0;
    }
    const double m2 = 2.0 * m;
    std::vector<double> sigma_in(part.community_count, 0.0);
    std::vector<double> sigma_tot(part.community_count, 0.0);
    for (NodeId u = 0; u < g.node_count; ++u) {
        const NodeId cu = part.assignment[u];
        double deg = 2.0 * g.self_weights[u];
        sigma_in[cu] += 2.0 * g.self_weights[u];
        for (const Link& l : g.adj[u]) {
            deg += l.weight;
            if (part.assignment[l.to] == cu) sigma_in[cu] += l.weight;
        }
        sigma_tot[cu] += deg;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < part.community_count; ++c) {
        const double frac_tot = sigma_tot[c] / m2;
        q += sigma_in[c] / m2 - frac_tot * frac_tot;
    }
    return q;
}

/// Louvain dendrogram: levels[0] holds the finest partition, later levels
/// group it further. Every level is expressed over the original node set.
struct Dendrogram {
    std::vector<Partition> levels;

    const Partition& at(int level) const { return levels.at(static_cast<std::size_t>(level)); }
    int top_level() const { return static_cast<int>(levels.size()) - 1; }
};

namespace detail {

struct LevelResult {
    std::vector<NodeId> assignment;   // contiguous community ids
    std::size_t community_count = 0;
    bool moved = false;
};

// One Louvain local-move phase: sweep nodes in random order, moving each to
// the neighboring community with the largest strictly positive modularity
// gain (ties toward the smallest community id), until a full pass changes
// nothing. Returns a renumbered partition of the given graph.
inline LevelResult louvain_one_level(const WeightedGraph& g, SplitMix64& rng) {
    const std::size_t n = g.node_count;
    const std::vector<double> deg = g.degrees();
    const double m2 = std::accumulate(deg.begin(), deg.end(), 0.0);
    std::vector<NodeId> node2com(n);
    std::iota(node2com.begin(), node2com.end(), NodeId{0});
    std::vector<double> com_tot = deg;

    LevelResult result;
    if (n == 0 || m2 <= 0.0) {
        result.assignment = node2com;
        result.community_count = n;
        return result;
    }

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    // Scratch accumulator for link weight toward each neighboring community.
    std::vector<double> neigh_weight(n, -1.0);
    std::vector<NodeId> neigh_coms;

    bool improved = true;
    unsigned pass = 0;
    constexpr unsigned kMaxPasses = 256;
    while (improved && pass++ < kMaxPasses) {
        improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = i + rng.below(n - i);
            std::swap(order[i], order[j]);
        }
        for (NodeId v : order) {
            const NodeId c_old = node2com[v];
            neigh_coms.clear();
            for (const Link& l : g.adj[v]) {
                const NodeId c = node2com[l.to];
                if (neigh_weight[c] < 0.0) {
                    neigh_weight[c] = 0.0;
                    neigh_coms.push_back(c);
                }
                neigh_weight[c] += l.weight;
            }
            com_tot[c_old] -= deg[v];
            const double k_old = neigh_weight[c_old] < 0.0 ? 0.0 : neigh_weight[c_old];
            const double scale = deg[v] / m2;
            NodeId choice = c_old;
            double choice_score = k_old - com_tot[c_old] * scale;
            for (NodeId c : neigh_coms) {
                if (c == c_old) continue;
                const double score = neigh_weight[c] - com_tot[c] * scale;
                if (score > choice_score ||
                    (score == choice_score && choice != c_old && c < choice)) {
                    choice = c;
                    choice_score = score;
                }
            }
            com_tot[choice] += deg[v];
            node2com[v] = choice;
            if (choice != c_old) {
                improved = true;
                result.moved = true;
            }
            for (NodeId c : neigh_coms) neigh_weight[c] = -1.0;
        }
    }

    // Renumber community ids by first appearance in node order.
    std::vector<NodeId> remap(n, static_cast<NodeId>(n));
    NodeId next = 0;
    for (NodeId v = 0; v < n; ++v) {
        NodeId& slot = remap[node2com[v]];
        if (slot == static_cast<NodeId>(n)) slot = next++;
        node2com[v] = remap[node2com[v]];
    }
    result.assignment = std::move(node2com);
    result.community_count = next;
    return result;
}

// Quotient graph of a partition: communities become nodes, cross-community
// weights sum into edges, intra-community plus member self-loop mass becomes
// the new self weight.
inline WeightedGraph aggregate(const WeightedGraph& g, const std::vector<NodeId>& assignment,
                               std::size_t community_count) {
    WeightedGraph out;
    out.resize(community_count);
    std::map<std::pair<NodeId, NodeId>, double> cross;
    for (NodeId u = 0; u < g.node_count; ++u) {
        const NodeId cu = assignment[u];
        out.self_weights[cu] += g.self_weights[u];
        for (const Link& l : g.adj[u]) {
            if (u >= l.to) continue;
            const NodeId cv = assignment[l.to];
            if (cu == cv)
                out.self_weights[cu] += l.weight;
            else
                cross[{std::min(cu, cv), std::max(cu, cv)}] += l.weight;
        }
    }
    for (const auto& [key, w] : cross) out.add_edge(key.first, key.second, w);
    return out;
}

} // namespace detail

/// Greedy Louvain modularity optimization. Node sweep order is randomized
/// per pass from the seed, so a fixed seed gives a fixed dendrogram.
inline Dendrogram louvain(const WeightedGraph& g, std::uint64_t seed) {
    Dendrogram dendrogram;
    if (g.node_count == 0) return dendrogram;
    SplitMix64 rng(mix_seed(seed, 0x6c6f757661696e /*"louvain"*/));
    WeightedGraph current = g;
    std::vector<NodeId> composed(g.node_count);
    std::iota(composed.begin(), composed.end(), NodeId{0});
    int level = 0;
    constexpr int kMaxLevels = 100;
    while (level < kMaxLevels) {
        const auto r = detail::louvain_one_level(current, rng);
        if (!r.moved && level > 0) break;
        Partition part;
        part.level = level;
        part.community_count = r.community_count;
        part.assignment.resize(g.node_count);
        for (std::size_t v = 0; v < g.node_count; ++v)
            part.assignment[v] = r.assignment[composed[v]];
        composed = part.assignment;
        dendrogram.levels.push_back(std::move(part));
        if (!r.moved) break;
        current = detail::aggregate(current, r.assignment, r.community_count);
        ++level;
    }
    return dendrogram;
}

/// Point-to-pipeline wiring for induced-graph metadata: which landmark covers
/// each graph node, which graph node each raw point belongs to, and raw
/// labels. Empty spans fall back to "each graph node is one point".
struct InduceMeta {
    const LandmarkCover* cover = nullptr;
    std::span<const NodeId> point_to_node;   // raw point -> G_M node
    std::span<const int> labels;             // per raw point
};

/// Builds the induced graph at a partition: inter-community weights summed
/// into edges, intra-community weights into self weights, and node metadata
/// (member landmarks, covered point counts, label histograms) rolled up.
inline InducedGraph induce(const WeightedGraph& g, const Partition& part,
                           const InduceMeta& meta = {}) {
    if (part.assignment.size() != g.node_count)
        throw std::invalid_argument("partition does not cover the graph");
    InducedGraph ig;
    ig.graph = detail::aggregate(g, part.assignment, part.community_count);
    ig.nodes.assign(part.community_count, {});

    // Member landmarks: with no cover, every graph node is its own landmark.
    const std::size_t landmark_count =
        meta.cover ? meta.cover->landmarks.size() : g.node_count;
    for (NodeId li = 0; li < landmark_count; ++li)
        ig.nodes[part.assignment[li]].member_landmarks.push_back(li);

    const std::size_t point_count =
        meta.point_to_node.empty()
            ? (meta.cover ? meta.cover->rev_neigh.size() : g.node_count)
            : meta.point_to_node.size();
    for (std::size_t p = 0; p < point_count; ++p) {
        const NodeId gm_node =
            meta.point_to_node.empty() ? static_cast<NodeId>(p) : meta.point_to_node[p];
        const NodeId landmark = meta.cover ? meta.cover->rev_neigh[gm_node] : gm_node;
        NodeMeta& node = ig.nodes[part.assignment[landmark]];
        node.point_count += 1;
        if (!meta.labels.empty()) node.label_histogram[meta.labels[p]] += 1;
    }
    return ig;
}

} // namespace shapevis
