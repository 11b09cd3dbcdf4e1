#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "shapevis/community.hpp"
#include "shapevis/knn.hpp"
#include "shapevis/rng.hpp"
#include "shapevis/types.hpp"

namespace shapevis {

/// Segments the summary graph by running Louvain on its weighted edges and
/// taking the finest (level-0) partition. Nodes of an edgeless graph each
/// form their own segment.
inline Partition pseudo_label(const SummaryGraph& g, std::uint64_t seed = 1) {
    WeightedGraph wg;
    wg.resize(g.node_count);
    for (const SummaryEdge& e : g.edges) wg.add_edge(e.u, e.v, e.weight);
    const Dendrogram dendrogram = louvain(wg, seed);
    if (dendrogram.levels.empty()) return Partition{};
    return dendrogram.levels.front();
}

/// Expands a per-summary-node segmentation to raw points through the
/// point -> node assignment.
inline std::vector<NodeId> point_segments(const Partition& node_segments,
                                          const std::vector<NodeId>& point_assignment) {
    std::vector<NodeId> out(point_assignment.size());
    for (std::size_t p = 0; p < point_assignment.size(); ++p)
        out[p] = node_segments.assignment.at(point_assignment[p]);
    return out;
}

/// Default cap on cosine pairs evaluated per segment; beyond it the mean is
/// estimated from that many sampled pairs.
inline constexpr std::uint64_t kCosinePairCap = 1'000'000;

/// Mean cosine similarity over unordered same-segment point pairs.
/// Singleton segments contribute no pairs; zero vectors are excluded with a
/// warning. Segments with more than `pair_cap` pairs are estimated by seeded
/// sampling, weighted by their true pair count.
inline double avg_intra_segment_cosine(const PointCloud& pc,
                                       const std::vector<NodeId>& segment_of_point,
                                       std::uint64_t pair_cap = kCosinePairCap,
                                       std::uint64_t seed = 1,
                                       std::vector<std::string>* warnings = nullptr) {
    if (segment_of_point.size() != pc.count)
        throw std::invalid_argument("segment assignment does not cover the point cloud");
    const std::size_t d = pc.dim;

    std::vector<double> norms(pc.count);
    NodeId max_segment = 0;
    for (std::size_t p = 0; p < pc.count; ++p) {
        norms[p] = std::sqrt(detail::dot(pc.row(p), pc.row(p), d));
        max_segment = std::max(max_segment, segment_of_point[p]);
    }

    std::vector<std::vector<NodeId>> members(std::size_t(max_segment) + 1);
    std::size_t dropped = 0;
    for (std::size_t p = 0; p < pc.count; ++p) {
        if (norms[p] == 0.0) {
            ++dropped;
            continue;
        }
        members[segment_of_point[p]].push_back(static_cast<NodeId>(p));
    }
    if (dropped > 0)
        detail::push_warning(warnings, std::to_string(dropped) +
                                           " zero vector(s) excluded from cosine metric");

    auto cosine = [&](NodeId a, NodeId b) {
        return detail::dot(pc.row(a), pc.row(b), d) / (norms[a] * norms[b]);
    };

    double weighted_sum = 0.0;
    double total_pairs = 0.0;
    SplitMix64 rng(mix_seed(seed, 0x636f73 /*"cos"*/));
    for (const auto& seg : members) {
        const std::uint64_t size = seg.size();
        if (size < 2) continue;
        const double pairs = 0.5 * double(size) * double(size - 1);
        double mean;
        if (pairs <= double(pair_cap)) {
            double sum = 0.0;
            for (std::size_t i = 0; i < size; ++i)
                for (std::size_t j = i + 1; j < size; ++j) sum += cosine(seg[i], seg[j]);
            mean = sum / pairs;
        } else {
            double sum = 0.0;
            for (std::uint64_t s = 0; s < pair_cap; ++s) {
                const std::uint64_t i = rng.below(size);
                std::uint64_t j = rng.below(size - 1);
                if (j >= i) ++j;
                sum += cosine(seg[i], seg[j]);
            }
            mean = sum / double(pair_cap);
        }
        weighted_sum += mean * pairs;
        total_pairs += pairs;
    }
    if (total_pairs == 0.0) {
        detail::push_warning(warnings, "no same-segment pairs; cosine metric defined as 0");
        return 0.0;
    }
    return weighted_sum / total_pairs;
}

} // namespace shapevis
