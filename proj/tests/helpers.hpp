#pragma once

// Shared fixtures and independent oracle implementations for the test suite.
// Oracles deliberately use naive algorithms and std::mt19937_64-based
// generation so they share no code path with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "shapevis/knn.hpp"
#include "shapevis/types.hpp"

namespace testutil {

using shapevis::NodeId;

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

inline shapevis::PointCloud random_cloud(std::size_t n, std::size_t d, std::uint64_t seed,
                                         bool labeled = false) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    shapevis::PointCloud pc;
    pc.count = n;
    pc.dim = d;
    pc.data.resize(n * d);
    for (double& v : pc.data) v = coord(rng);
    if (labeled) {
        std::uniform_int_distribution<int> label(0, 4);
        pc.labels.resize(n);
        for (int& l : pc.labels) l = label(rng);
    }
    return pc;
}

inline shapevis::NeighborGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    shapevis::NeighborGraph g;
    g.resize(n);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (coin(rng) < p) g.add_edge(i, j);
    return g;
}

inline shapevis::WeightedGraph random_weighted_graph(std::size_t n, double p, std::uint64_t seed,
                                                     double wmin = 0.1, double wmax = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> weight(wmin, wmax);
    shapevis::WeightedGraph g;
    g.resize(n);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (coin(rng) < p) g.add_edge(i, j, weight(rng));
    return g;
}

inline shapevis::InducedGraph random_induced_graph(std::size_t n, double p, std::uint64_t seed,
                                                   bool with_self_weights = true) {
    shapevis::InducedGraph ig;
    ig.graph = random_weighted_graph(n, p, seed);
    if (with_self_weights) {
        std::mt19937_64 rng(seed ^ 0xABCDEF);
        std::uniform_real_distribution<double> w(0.0, 2.0);
        for (double& s : ig.graph.self_weights) s = w(rng);
    }
    ig.nodes.resize(n);
    for (NodeId i = 0; i < n; ++i) {
        ig.nodes[i].member_landmarks = {i};
        ig.nodes[i].point_count = 1;
    }
    return ig;
}

// ---------------------------------------------------------------------------
// k-nearest-neighbor oracle: full distance table + stable sort
// ---------------------------------------------------------------------------

inline std::vector<std::vector<shapevis::Neighbor>> oracle_knn(const shapevis::PointCloud& pc,
                                                               std::size_t k) {
    const std::size_t m = pc.count;
    k = std::min(k, m - 1);
    std::vector<std::vector<shapevis::Neighbor>> lists(m);
    for (std::size_t q = 0; q < m; ++q) {
        std::vector<shapevis::Neighbor> all;
        for (std::size_t c = 0; c < m; ++c) {
            if (c == q) continue;
            double acc = 0.0;
            for (std::size_t j = 0; j < pc.dim; ++j) {
                const double diff = pc.row(q)[j] - pc.row(c)[j];
                acc += diff * diff;
            }
            all.push_back({static_cast<NodeId>(c), std::sqrt(acc)});
        }
        std::stable_sort(all.begin(), all.end(),
                         [](const shapevis::Neighbor& a, const shapevis::Neighbor& b) {
                             return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
                         });
        all.resize(k);
        lists[q] = std::move(all);
    }
    return lists;
}

// ---------------------------------------------------------------------------
// Witness oracle: exhaustive 2-NN from the sample per witness point
// ---------------------------------------------------------------------------

inline std::pair<NodeId, NodeId> oracle_witness_2nn(const shapevis::PointCloud& pc,
                                                    const std::vector<NodeId>& sample_rows,
                                                    NodeId witness_row) {
    std::vector<std::pair<double, NodeId>> dists;
    for (std::size_t s = 0; s < sample_rows.size(); ++s) {
        double acc = 0.0;
        for (std::size_t j = 0; j < pc.dim; ++j) {
            const double diff = pc.row(witness_row)[j] - pc.row(sample_rows[s])[j];
            acc += diff * diff;
        }
        dists.emplace_back(acc, static_cast<NodeId>(s));
    }
    std::stable_sort(dists.begin(), dists.end());
    return {dists[0].second, dists[1].second};
}

// ---------------------------------------------------------------------------
// Markov-chain oracle: endpoint distribution by dense transition powering,
// averaged over walk lengths theta in [theta1, theta2]
// ---------------------------------------------------------------------------

inline std::vector<std::vector<double>> oracle_endpoint_distribution(
    const shapevis::NeighborGraph& g, const shapevis::LandmarkCover& cover, unsigned theta1,
    unsigned theta2) {
    const std::size_t m = g.node_count;
    const std::size_t L = cover.landmarks.size();
    std::vector<std::vector<double>> result(L, std::vector<double>(L, 0.0));
    for (std::size_t li = 0; li < L; ++li) {
        std::vector<double> v(m, 0.0), next(m, 0.0), acc(m, 0.0);
        v[cover.landmarks[li]] = 1.0;
        for (unsigned step = 1; step <= theta2; ++step) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t y = 0; y < m; ++y) {
                if (v[y] == 0.0) continue;
                const auto& nbrs = g.adj[y];
                if (nbrs.empty()) {
                    next[y] += v[y];   // isolated node: walk stays in place
                } else {
                    const double share = v[y] / double(nbrs.size());
                    for (NodeId z : nbrs) next[z] += share;
                }
            }
            v.swap(next);
            if (step >= theta1)
                for (std::size_t y = 0; y < m; ++y) acc[y] += v[y];
        }
        const double norm = 1.0 / double(theta2 - theta1 + 1);
        for (std::size_t y = 0; y < m; ++y)
            result[li][cover.rev_neigh[y]] += acc[y] * norm;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Modularity oracle: direct double sum over the dense adjacency matrix with
// A_ii = 2 * self_weight
// ---------------------------------------------------------------------------

inline double oracle_modularity(const shapevis::WeightedGraph& g,
                                const std::vector<NodeId>& assignment) {
    const std::size_t n = g.node_count;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (NodeId u = 0; u < n; ++u) {
        a[u][u] = 2.0 * g.self_weights[u];
        for (const auto& l : g.adj[u]) a[u][l.to] = l.weight;
    }
    double m2 = 0.0;
    std::vector<double> deg(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            deg[i] += a[i][j];
            m2 += a[i][j];
        }
    if (m2 <= 0.0) return 0.0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (assignment[i] == assignment[j]) q += a[i][j] / m2 - deg[i] * deg[j] / (m2 * m2);
    return q;
}

// Per-edge modularity recomputed from scratch on the dense matrix.
inline double oracle_edge_modularity(const shapevis::InducedGraph& ig, NodeId u, NodeId v) {
    const std::size_t n = ig.graph.node_count;
    double m = 0.0;
    std::vector<double> deg(n, 0.0);
    for (NodeId i = 0; i < n; ++i) {
        m += ig.graph.self_weights[i];
        deg[i] += 2.0 * ig.graph.self_weights[i];
        for (const auto& l : ig.graph.adj[i]) {
            deg[i] += l.weight;
            if (i < l.to) m += l.weight;
        }
    }
    const double m2 = 2.0 * m;
    return ig.graph.edge_weight(u, v) / m2 - deg[u] * deg[v] / (m2 * m2);
}

// ---------------------------------------------------------------------------
// Cycle oracle: every simple cycle through edge (u, v), as edge sequences
// ---------------------------------------------------------------------------

inline void oracle_paths_rec(const std::vector<std::vector<NodeId>>& adj, NodeId current,
                             NodeId goal, std::vector<char>& used, std::vector<NodeId>& path,
                             std::vector<std::vector<NodeId>>& out) {
    if (current == goal) {
        out.push_back(path);
        return;
    }
    for (NodeId next : adj[current]) {
        if (used[next]) continue;
        used[next] = 1;
        path.push_back(next);
        oracle_paths_rec(adj, next, goal, used, path, out);
        path.pop_back();
        used[next] = 0;
    }
}

/// All simple paths u -> v in the graph given by canonical edge list,
/// excluding the direct edge (u, v) itself.
inline std::vector<std::vector<NodeId>> oracle_simple_paths(
    std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges, NodeId u, NodeId v) {
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& [a, b] : edges) {
        if ((a == u && b == v) || (a == v && b == u)) continue;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<std::vector<NodeId>> out;
    std::vector<char> used(n, 0);
    std::vector<NodeId> path{u};
    used[u] = 1;
    oracle_paths_rec(adj, u, v, used, path, out);
    return out;
}

// ---------------------------------------------------------------------------
// Temp files
// ---------------------------------------------------------------------------

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("shapevis_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline bool has_cycle(const shapevis::SummaryGraph& g) {
    // An undirected simple graph is acyclic iff |E| = |V| - #components.
    return g.edges.size() > g.node_count - component_count(g);
}

} // namespace testutil
