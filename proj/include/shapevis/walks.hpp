#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "shapevis/parallel.hpp"
#include "shapevis/rng.hpp"
#include "shapevis/types.hpp"

namespace shapevis {

/// Sparse landmark-to-landmark walk endpoint counts. rows[i] maps the
/// landmark index j to n_ij, the number of walks started at landmark i whose
/// endpoint fell in landmark j's neighborhood set. Raw counts: every
/// completed walk is recorded, self-transitions included, so each row sums
/// to the number of walks started there.
struct WalkCountMatrix {
    std::size_t landmark_count = 0;
    std::vector<std::vector<std::pair<NodeId, std::uint64_t>>> rows;   // sorted by column
    std::vector<std::uint64_t> row_totals;
};

/// Runs beta random walks per landmark on G_M. Each walk draws its length
/// uniformly from [theta1, theta2] and moves to a uniformly random neighbor
/// at every step; walks reaching an isolated node stop in place. Each
/// (landmark, walk) pair draws from its own seed-derived stream, so counts
/// are identical for any thread count.
inline WalkCountMatrix run_walks(const NeighborGraph& g, const LandmarkCover& cover,
                                 const PipelineConfig& cfg, std::uint64_t seed) {
    const std::size_t L = cover.landmarks.size();
    WalkCountMatrix counts;
    counts.landmark_count = L;
    counts.rows.assign(L, {});
    counts.row_totals.assign(L, 0);
    const unsigned theta1 = cfg.theta1();
    const unsigned theta2 = std::max(cfg.theta2(), theta1);
    const std::uint64_t span = theta2 - theta1 + 1;

    // Flat CSR copy of the adjacency; the walk loop does one random access
    // per step and the vector-of-vectors layout costs a second indirection.
    std::vector<std::uint64_t> offsets(g.node_count + 1, 0);
    for (std::size_t v = 0; v < g.node_count; ++v)
        offsets[v + 1] = offsets[v] + g.adj[v].size();
    std::vector<NodeId> targets(offsets.back());
    for (std::size_t v = 0; v < g.node_count; ++v)
        std::copy(g.adj[v].begin(), g.adj[v].end(), targets.begin() + offsets[v]);

    parallel_for(L, cfg.threads, [&](std::size_t i) {
        std::map<NodeId, std::uint64_t> row;
        const NodeId start = cover.landmarks[i];
        // Walks advance in lockstep batches: each has its own stream, so the
        // counts match a one-at-a-time run, but the independent loads per
        // step overlap instead of serializing on cache misses.
        constexpr std::size_t kBatch = 16;
        SplitMix64 rng[kBatch];
        std::uint64_t remaining[kBatch];
        NodeId node[kBatch];
        for (std::size_t w0 = 0; w0 < cfg.beta; w0 += kBatch) {
            const std::size_t batch = std::min(kBatch, cfg.beta - w0);
            for (std::size_t j = 0; j < batch; ++j) {
                rng[j] = SplitMix64(mix_seed(seed, 0x77616c6b /*"walk"*/, i, w0 + j));
                remaining[j] = theta1 + rng[j].below(span);
                node[j] = start;
            }
            bool active = true;
            while (active) {
                active = false;
                for (std::size_t j = 0; j < batch; ++j) {
                    if (remaining[j] == 0) continue;
                    const std::uint64_t begin = offsets[node[j]];
                    const std::uint64_t deg = offsets[node[j] + 1] - begin;
                    if (deg == 0) {
                        remaining[j] = 0;   // isolated node: walk ends in place
                        continue;
                    }
                    node[j] = targets[begin + rng[j].below(deg)];
                    if (--remaining[j] != 0) active = true;
                }
            }
            for (std::size_t j = 0; j < batch; ++j) ++row[cover.rev_neigh[node[j]]];
        }
        counts.rows[i].assign(row.begin(), row.end());
        counts.row_totals[i] = cfg.beta;
    });
    return counts;
}

/// Sparse row-thresholded transition estimates. a_ij keeps n_ij / sum_k n_ik
/// when n_ij >= th and drops to 0 otherwise; the denominator is the raw row
/// sum, not the post-threshold one.
struct TransitionMatrix {
    std::size_t landmark_count = 0;
    std::vector<std::vector<std::pair<NodeId, double>>> rows;   // sorted by column
};

/// Applies the threshold rule to the walk counts. Self-transition counts are
/// zeroed before normalization by default (they carry no inter-landmark
/// structure); set keep_self to retain them.
inline TransitionMatrix transition_matrix(const WalkCountMatrix& counts, std::uint64_t th,
                                          bool keep_self = false) {
    TransitionMatrix a;
    a.landmark_count = counts.landmark_count;
    a.rows.assign(a.landmark_count, {});
    for (std::size_t i = 0; i < counts.landmark_count; ++i) {
        std::uint64_t denom = 0;
        for (const auto& [j, n] : counts.rows[i]) {
            if (!keep_self && j == i) continue;
            denom += n;
        }
        if (denom == 0) continue;
        auto& out = a.rows[i];
        for (const auto& [j, n] : counts.rows[i]) {
            if (!keep_self && j == i) continue;
            if (n >= th) out.emplace_back(j, double(n) / double(denom));
        }
    }
    return a;
}

/// Probabilistic-union symmetrization w_ij = a_ij + a_ji - a_ij * a_ji,
/// computed once per unordered pair and mirrored, so symmetry is exact.
/// Diagonal entries (possible only with keep_self) land in self_weights.
inline WeightedLandmarkGraph symmetrize(const TransitionMatrix& a) {
    WeightedLandmarkGraph g;
    g.resize(a.landmark_count);
    auto lookup = [&](std::size_t row, NodeId col) {
        const auto& r = a.rows[row];
        auto it = std::lower_bound(r.begin(), r.end(), col,
                                   [](const auto& e, NodeId c) { return e.first < c; });
        return (it != r.end() && it->first == col) ? it->second : 0.0;
    };
    for (NodeId i = 0; i < a.landmark_count; ++i) {
        for (const auto& [j, aij] : a.rows[i]) {
            if (j == i) {
                g.self_weights[i] = aij + aij - aij * aij;
            } else if (j > i) {
                const double aji = lookup(j, i);
                const double w = aij + aji - aij * aji;
                if (w != 0.0) g.add_edge(i, j, w);
            } else if (lookup(j, i) == 0.0) {
                // Pair present only in this direction; row j never saw it.
                g.add_edge(j, i, aij);
            }
        }
    }
    return g;
}

} // namespace shapevis
