#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace shapevis {

using NodeId = std::uint32_t;

namespace detail {
inline void push_warning(std::vector<std::string>* sink, std::string msg) {
    if (sink) sink->push_back(std::move(msg));
}
} // namespace detail

// ---------------------------------------------------------------------------
// Point cloud
// ---------------------------------------------------------------------------

/// Dense N x d point matrix, row-major, with optional integer class labels.
/// Coordinates are held as doubles; file formats narrow to float32 on disk.
struct PointCloud {
    std::size_t count = 0;
    std::size_t dim = 0;
    std::vector<double> data;   // count * dim
    std::vector<int> labels;    // empty, or exactly `count` entries

    const double* row(std::size_t i) const { return data.data() + i * dim; }
    double* row(std::size_t i) { return data.data() + i * dim; }
    bool has_labels() const { return !labels.empty(); }
};

/// Read-only view of a dense row-major matrix, used by the neighbor-search
/// routines so they can run on a point cloud or any extracted subset.
struct MatrixView {
    const double* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    const double* row(std::size_t i) const { return data + i * cols; }
};

inline MatrixView view_of(const PointCloud& pc) { return {pc.data.data(), pc.count, pc.dim}; }

struct ValidationReport {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
};

/// Checks the point-cloud invariants: finite coordinates, label arity, and
/// non-degenerate shape. Returns a report instead of throwing so callers can
/// surface every problem at once.
inline ValidationReport validate(const PointCloud& pc) {
    ValidationReport report;
    if (pc.count < 1) report.issues.push_back("point cloud is empty (need N >= 1)");
    if (pc.dim < 1) report.issues.push_back("point dimension is zero (need d >= 1)");
    if (pc.data.size() != pc.count * pc.dim)
        report.issues.push_back("data buffer size " + std::to_string(pc.data.size()) +
                                " does not match N*d = " + std::to_string(pc.count * pc.dim));
    else {
        for (std::size_t i = 0; i < pc.count; ++i) {
            const double* r = pc.row(i);
            for (std::size_t j = 0; j < pc.dim; ++j) {
                if (!std::isfinite(r[j])) {
                    report.issues.push_back("non-finite coordinate at row " + std::to_string(i) +
                                            ", column " + std::to_string(j));
                    break;
                }
            }
        }
    }
    if (!pc.labels.empty() && pc.labels.size() != pc.count)
        report.issues.push_back("label count " + std::to_string(pc.labels.size()) +
                                " does not match N = " + std::to_string(pc.count));
    return report;
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

/// Undirected, unweighted graph over the sampled points X_M. Adjacency lists
/// are kept sorted; an edge is stored in both endpoint lists and reported in
/// canonical (i < j) form.
struct NeighborGraph {
    std::size_t node_count = 0;
    std::vector<std::vector<NodeId>> adj;
    std::vector<NodeId> sample_map;   // node -> original point-cloud row
    std::size_t edge_count = 0;

    void resize(std::size_t n) {
        node_count = n;
        adj.assign(n, {});
        if (sample_map.size() != n) {
            sample_map.resize(n);
            for (std::size_t i = 0; i < n; ++i) sample_map[i] = static_cast<NodeId>(i);
        }
    }

    bool has_edge(NodeId a, NodeId b) const {
        if (a == b) return false;
        const auto& list = adj[a].size() <= adj[b].size() ? adj[a] : adj[b];
        const NodeId probe = adj[a].size() <= adj[b].size() ? b : a;
        return std::binary_search(list.begin(), list.end(), probe);
    }

    /// Inserts the undirected edge {a, b}; returns false on self-loops and
    /// duplicates, so repeated insertion is idempotent.
    bool add_edge(NodeId a, NodeId b) {
        if (a == b) return false;
        auto it = std::lower_bound(adj[a].begin(), adj[a].end(), b);
        if (it != adj[a].end() && *it == b) return false;
        adj[a].insert(it, b);
        auto jt = std::lower_bound(adj[b].begin(), adj[b].end(), a);
        adj[b].insert(jt, a);
        ++edge_count;
        return true;
    }

    /// Canonical (i < j) edge list, lexicographically sorted.
    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        out.reserve(edge_count);
        for (NodeId u = 0; u < node_count; ++u)
            for (NodeId v : adj[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }
};

/// Landmark selection over a NeighborGraph: the chosen landmarks (as graph
/// node ids, in selection order) and the total assignment of every graph
/// node to the landmark index that covered it.
struct LandmarkCover {
    std::vector<NodeId> landmarks;   // G_M node ids
    std::vector<NodeId> rev_neigh;   // G_M node -> landmark index (0..L-1)
};

struct Link {
    NodeId to = 0;
    double weight = 0.0;
};

/// Symmetric weighted graph with adjacency-list storage. Off-diagonal weights
/// live in `adj` (mirrored in both endpoint lists, sorted by neighbor id);
/// self-loop mass, when any, lives in `self_weights`. A self-loop counts once
/// in the total weight and twice in a node's degree, which keeps modularity
/// invariant under community aggregation.
struct WeightedGraph {
    std::size_t node_count = 0;
    std::vector<std::vector<Link>> adj;
    std::vector<double> self_weights;

    void resize(std::size_t n) {
        node_count = n;
        adj.assign(n, {});
        self_weights.assign(n, 0.0);
    }

    void add_edge(NodeId a, NodeId b, double w) {
        if (a == b) {
            self_weights[a] += w;
            return;
        }
        insert_link(a, b, w);
        insert_link(b, a, w);
    }

    double edge_weight(NodeId a, NodeId b) const {
        if (a == b) return self_weights[a];
        const auto& list = adj[a];
        auto it = std::lower_bound(list.begin(), list.end(), b,
                                   [](const Link& l, NodeId id) { return l.to < id; });
        return (it != list.end() && it->to == b) ? it->weight : 0.0;
    }

    std::size_t edge_count() const {
        std::size_t degsum = 0;
        for (const auto& list : adj) degsum += list.size();
        return degsum / 2;
    }

    /// Total weight m: unordered off-diagonal edges plus self-loops.
    double total_weight() const {
        double sum = 0.0;
        for (NodeId u = 0; u < node_count; ++u)
            for (const Link& l : adj[u])
                if (u < l.to) sum += l.weight;
        for (double s : self_weights) sum += s;
        return sum;
    }

    /// Weighted degree per node; self-loops count twice.
    std::vector<double> degrees() const {
        std::vector<double> deg(node_count, 0.0);
        for (NodeId u = 0; u < node_count; ++u) {
            double d = 2.0 * self_weights[u];
            for (const Link& l : adj[u]) d += l.weight;
            deg[u] = d;
        }
        return deg;
    }

  private:
    void insert_link(NodeId from, NodeId to, double w) {
        auto& list = adj[from];
        auto it = std::lower_bound(list.begin(), list.end(), to,
                                   [](const Link& l, NodeId id) { return l.to < id; });
        if (it != list.end() && it->to == to)
            it->weight += w;
        else
            list.insert(it, Link{to, w});
    }
};

/// The weighted landmark graph G_L is a WeightedGraph whose weights lie in
/// [0, 1] with an empty diagonal (unless self-transitions are retained).
using WeightedLandmarkGraph = WeightedGraph;

// ---------------------------------------------------------------------------
// Partitions and summary structures
// ---------------------------------------------------------------------------

/// Total assignment of nodes to communities at one dendrogram level.
/// Community ids are contiguous 0..community_count-1.
struct Partition {
    std::vector<NodeId> assignment;
    std::size_t community_count = 0;
    int level = 0;
};

struct NodeMeta {
    std::vector<NodeId> member_landmarks;        // landmark indices, ascending
    std::uint64_t point_count = 0;               // raw points covered
    std::map<int, std::uint64_t> label_histogram;
};

/// Most frequent label of a node; ties resolved toward the smallest label id.
inline std::optional<int> dominant_label(const NodeMeta& meta) {
    std::optional<int> best;
    std::uint64_t best_count = 0;
    for (const auto& [label, count] : meta.label_histogram) {
        if (count > best_count) {
            best = label;
            best_count = count;
        }
    }
    return best;
}

/// Quotient of the landmark graph at one partition level: communities as
/// nodes, inter-community mass as edges, intra-community mass as self weight.
struct InducedGraph {
    WeightedGraph graph;
    std::vector<NodeMeta> nodes;
};

enum class EdgePhase { spanning, reintroduced };

inline const char* to_string(EdgePhase p) {
    return p == EdgePhase::spanning ? "spanning" : "reintroduced";
}

struct SummaryEdge {
    NodeId u = 0, v = 0;      // canonical u < v
    double weight = 0.0;
    double modularity = 0.0;  // per-edge modularity contribution
    EdgePhase phase = EdgePhase::spanning;
};

/// Final torn graph: same nodes and metadata as the induced graph, edge set
/// restricted to the spanning phase plus reintroduced loop edges.
struct SummaryGraph {
    std::size_t node_count = 0;
    std::vector<NodeMeta> nodes;
    std::vector<SummaryEdge> edges;   // sorted by (u, v)
};

// ---------------------------------------------------------------------------
// Component counting
// ---------------------------------------------------------------------------

namespace detail {
template <typename NeighborsOf>
std::size_t count_components(std::size_t n, NeighborsOf&& neighbors_of) {
    std::vector<char> seen(n, 0);
    std::size_t components = 0;
    std::vector<NodeId> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        ++components;
        seen[s] = 1;
        stack.push_back(static_cast<NodeId>(s));
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            neighbors_of(u, [&](NodeId v) {
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            });
        }
    }
    return components;
}
} // namespace detail

inline std::size_t component_count(const NeighborGraph& g) {
    return detail::count_components(g.node_count, [&](NodeId u, auto&& visit) {
        for (NodeId v : g.adj[u]) visit(v);
    });
}

inline std::size_t component_count(const WeightedGraph& g) {
    return detail::count_components(g.node_count, [&](NodeId u, auto&& visit) {
        for (const Link& l : g.adj[u]) visit(l.to);
    });
}

inline std::size_t component_count(const SummaryGraph& g) {
    std::vector<std::vector<NodeId>> adj(g.node_count);
    for (const SummaryEdge& e : g.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return detail::count_components(g.node_count, [&](NodeId u, auto&& visit) {
        for (NodeId v : adj[u]) visit(v);
    });
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class TearingMode { paper, fixed, all, none };
enum class Metric { euclidean, cosine };

inline const char* to_string(TearingMode m) {
    switch (m) {
        case TearingMode::paper: return "paper";
        case TearingMode::fixed: return "fixed";
        case TearingMode::all: return "all";
        default: return "none";
    }
}

inline const char* to_string(Metric m) {
    return m == Metric::euclidean ? "euclidean" : "cosine";
}

struct PipelineConfig {
    std::size_t m_cap = 1'000'000;   // sample-size cap
    double m_fraction = 1.0 / 3.0;   // sample fraction of N
    std::size_t k = 10;              // kNN graph degree
    unsigned k_prime_hops = 1;       // landmark cover hop radius
    std::size_t beta = 1000;         // walks per landmark
    unsigned walk_len = 50;          // l; walk length drawn from [l/2, l]
    std::uint64_t th = 2;            // walk-count threshold in the transition matrix
    int level = 0;                   // dendrogram level p
    TearingMode tearing = TearingMode::paper;
    double tearing_fixed_c = 0.0;    // threshold when tearing == fixed
    bool keep_self_transitions = false;
    Metric metric = Metric::euclidean;
    std::uint64_t seed = 1;
    unsigned threads = 0;            // 0 = hardware concurrency

    unsigned theta1() const { return std::max(1u, walk_len / 2); }
    unsigned theta2() const { return std::max(1u, walk_len); }

    ValidationReport check() const {
        ValidationReport report;
        if (m_cap == 0) report.issues.push_back("m_cap must be positive");
        if (!(m_fraction > 0.0) || m_fraction > 1.0)
            report.issues.push_back("m_fraction must lie in (0, 1]");
        if (k == 0) report.issues.push_back("k must be positive");
        if (beta == 0) report.issues.push_back("beta must be positive");
        if (walk_len == 0) report.issues.push_back("walk_len must be positive");
        if (k_prime_hops == 0) report.issues.push_back("hops must be positive");
        if (level < 0) report.issues.push_back("level must be non-negative");
        return report;
    }
};

} // namespace shapevis
