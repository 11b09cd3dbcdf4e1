#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "shapevis/knn.hpp"
#include "shapevis/parallel.hpp"
#include "shapevis/rng.hpp"
#include "shapevis/types.hpp"

namespace shapevis {

struct SampleSplit {
    std::vector<NodeId> sample;       // ascending original row ids
    std::vector<NodeId> complement;   // ascending, the remaining rows
};

inline std::size_t sample_size_for(std::size_t n, const PipelineConfig& cfg) {
    const auto frac = static_cast<std::size_t>(std::ceil(double(n) * cfg.m_fraction));
    return std::clamp<std::size_t>(std::min(cfg.m_cap, frac), 1, n);
}

/// Uniform sample of min(m_cap, ceil(N * m_fraction)) rows without
/// replacement, via partial Fisher-Yates. Both halves come back sorted.
inline SampleSplit sample_points(const PointCloud& pc, const PipelineConfig& cfg,
                                 std::uint64_t seed) {
    const std::size_t n = pc.count;
    const std::size_t m = sample_size_for(n, cfg);
    std::vector<NodeId> ids(n);
    std::iota(ids.begin(), ids.end(), NodeId{0});
    SplitMix64 rng(mix_seed(seed, 0x73616d706c65 /*"sample"*/));
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(ids[i], ids[j]);
    }
    SampleSplit split;
    split.sample.assign(ids.begin(), ids.begin() + m);
    split.complement.assign(ids.begin() + m, ids.end());
    std::sort(split.sample.begin(), split.sample.end());
    std::sort(split.complement.begin(), split.complement.end());
    return split;
}

struct WitnessAugmentResult {
    NeighborGraph graph;
    // Per complement point, the nearest sample node in G_M. Carries the
    // provenance needed to attribute non-sampled points to landmarks later.
    std::vector<NodeId> nearest_sample;
};

/// 1-witness augmentation: each non-sampled point witnesses the 1-simplex of
/// its two nearest sample points, whose edge is inserted if absent. Nearest
/// neighbors are exact; ties resolve toward the smaller sample id.
inline WitnessAugmentResult witness_augment(const NeighborGraph& g, const PointCloud& pc,
                                            const std::vector<NodeId>& complement,
                                            Metric metric = Metric::euclidean,
                                            unsigned threads = 0,
                                            std::vector<std::string>* warnings = nullptr) {
    WitnessAugmentResult result;
    result.graph = g;
    const std::size_t m = g.node_count;
    const std::size_t nw = complement.size();
    result.nearest_sample.assign(nw, 0);
    if (nw == 0) return result;
    if (m < 2) {
        detail::push_warning(warnings, "witness augmentation skipped: fewer than 2 sample points");
        return result;
    }

    // Compact copy of the sampled rows keeps the scan cache-friendly.
    const std::size_t d = pc.dim;
    std::vector<double> sample_rows(m * d);
    for (std::size_t i = 0; i < m; ++i)
        std::copy_n(pc.row(g.sample_map[i]), d, sample_rows.begin() + i * d);

    // Per-sample scores: ||s||^2 - 2 w.s for Euclidean (monotone in the true
    // distance for a fixed witness), -cos similarity scaled by norms for
    // cosine. Either way two samples compare by score exactly as by distance.
    std::vector<double> sample_norm2(m);
    for (std::size_t s = 0; s < m; ++s) {
        const double* row = sample_rows.data() + s * d;
        sample_norm2[s] = detail::dot(row, row, d);
    }

    struct Best2 {
        double d1, d2;
        NodeId i1, i2;
    };
    std::vector<Best2> best(nw);

    // Tiled scan: a block of witnesses shares one pass over the sample matrix.
    // The Euclidean path keeps the witness tile transposed (dim-major) so the
    // per-sample score loop vectorizes across witnesses with no horizontal
    // reduction.
    constexpr std::size_t kTile = 64;
    const std::size_t tiles = (nw + kTile - 1) / kTile;
    parallel_for(tiles, threads, [&](std::size_t t) {
        const std::size_t begin = t * kTile;
        const std::size_t end = std::min(begin + kTile, nw);
        const std::size_t width = end - begin;
        Best2 local[kTile];
        for (std::size_t i = 0; i < width; ++i)
            local[i] = {std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity(), 0, 0};

        std::vector<double> transposed(d * kTile, 0.0);
        for (std::size_t i = 0; i < width; ++i) {
            const double* w = pc.row(complement[begin + i]);
            for (std::size_t k = 0; k < d; ++k) transposed[k * kTile + i] = w[k];
        }

        double scores[kTile];
        for (std::size_t s = 0; s < m; ++s) {
            const double* srow = sample_rows.data() + s * d;
            const double snorm2 = sample_norm2[s];
            if (metric == Metric::euclidean) {
                for (std::size_t i = 0; i < kTile; ++i) scores[i] = 0.0;
                for (std::size_t k = 0; k < d; ++k) {
                    const double sk = srow[k];
                    const double* col = transposed.data() + k * kTile;
                    for (std::size_t i = 0; i < kTile; ++i) scores[i] += sk * col[i];
                }
                for (std::size_t i = 0; i < width; ++i)
                    scores[i] = snorm2 - 2.0 * scores[i];
            } else {
                const double snorm = std::sqrt(snorm2);
                for (std::size_t i = 0; i < width; ++i) {
                    const double* w = pc.row(complement[begin + i]);
                    const double wn = std::sqrt(detail::dot(w, w, d));
                    const double denom = wn * snorm;
                    scores[i] = denom == 0.0 ? 1.0 : 1.0 - detail::dot(w, srow, d) / denom;
                }
            }
            for (std::size_t i = 0; i < width; ++i) {
                const double dd = scores[i];
                Best2& b = local[i];
                if (dd < b.d1) {
                    b.d2 = b.d1;
                    b.i2 = b.i1;
                    b.d1 = dd;
                    b.i1 = static_cast<NodeId>(s);
                } else if (dd < b.d2) {
                    b.d2 = dd;
                    b.i2 = static_cast<NodeId>(s);
                }
            }
        }
        for (std::size_t i = 0; i < width; ++i) best[begin + i] = local[i];
    });

    for (std::size_t i = 0; i < nw; ++i) {
        result.nearest_sample[i] = best[i].i1;
        result.graph.add_edge(best[i].i1, best[i].i2);
    }
    return result;
}

/// Greedy landmark cover: repeatedly pick a uniform random uncovered node as
/// a landmark and assign every node within `hops` graph hops to it. Nodes
/// already covered keep their first assignment, so the neighborhood sets
/// partition the node set.
inline LandmarkCover select_landmarks(const NeighborGraph& g, unsigned hops,
                                      std::uint64_t seed) {
    const std::size_t n = g.node_count;
    LandmarkCover cover;
    cover.rev_neigh.assign(n, 0);
    if (n == 0) return cover;

    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    std::vector<std::size_t> pos(n);
    std::iota(pos.begin(), pos.end(), std::size_t{0});
    std::vector<char> covered(n, 0);

    auto remove_from_pool = [&](NodeId v) {
        const std::size_t p = pos[v];
        const NodeId last = pool.back();
        pool[p] = last;
        pos[last] = p;
        pool.pop_back();
    };

    SplitMix64 rng(mix_seed(seed, 0x6c616e646d61726b /*"landmark"*/));
    std::vector<NodeId> frontier, next;
    std::vector<NodeId> touched;   // nodes visited by the current BFS
    std::vector<char> visited(n, 0);

    while (!pool.empty()) {
        const NodeId lm = pool[rng.below(pool.size())];
        const NodeId lm_index = static_cast<NodeId>(cover.landmarks.size());
        cover.landmarks.push_back(lm);

        // Bounded BFS over the full graph; only uncovered nodes get assigned.
        frontier.assign(1, lm);
        visited[lm] = 1;
        touched.assign(1, lm);
        cover.rev_neigh[lm] = lm_index;
        covered[lm] = 1;
        remove_from_pool(lm);
        for (unsigned depth = 0; depth < hops && !frontier.empty(); ++depth) {
            next.clear();
            for (NodeId u : frontier) {
                for (NodeId v : g.adj[u]) {
                    if (visited[v]) continue;
                    visited[v] = 1;
                    touched.push_back(v);
                    next.push_back(v);
                    if (!covered[v]) {
                        covered[v] = 1;
                        cover.rev_neigh[v] = lm_index;
                        remove_from_pool(v);
                    }
                }
            }
            frontier.swap(next);
        }
        for (NodeId v : touched) visited[v] = 0;
    }
    return cover;
}

} // namespace shapevis
