#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapevis/community.hpp"
#include "shapevis/knn.hpp"
#include "shapevis/tearing.hpp"
#include "shapevis/types.hpp"
#include "shapevis/walks.hpp"
#include "shapevis/witness.hpp"

namespace shapevis {

struct RunReport {
    std::map<std::string, double> stage_times_ms;   // per stage, plus "total"
    std::size_t n = 0;
    std::size_t m_sampled = 0;
    std::size_t landmarks = 0;
    std::size_t communities = 0;
    std::size_t edges_induced = 0;
    std::size_t edges_spanning = 0;
    std::size_t edges_reinstated = 0;
    double modularity_q = 0.0;
    double threshold_c = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

inline nlohmann::json report_json(const RunReport& r) {
    return {{"stage_times_ms", r.stage_times_ms},
            {"n", r.n},
            {"m_sampled", r.m_sampled},
            {"landmarks", r.landmarks},
            {"communities", r.communities},
            {"edges_induced", r.edges_induced},
            {"edges_spanning", r.edges_spanning},
            {"edges_reinstated", r.edges_reinstated},
            {"modularity_q", r.modularity_q},
            {"threshold_c", std::isfinite(r.threshold_c) ? nlohmann::json(r.threshold_c)
                                                         : nlohmann::json(nullptr)},
            {"seed", r.seed}};
}

struct PipelineResult {
    SummaryGraph summary;
    std::vector<NodeId> point_assignment;   // raw point -> summary node
    InducedGraph induced;                   // pre-tearing graph, kept for diagnostics
    WeightedLandmarkGraph landmark_graph;
    RunReport report;
};

/// Runs the full pipeline: sample, kNN graph, witness augmentation, landmark
/// cover, random-walk weighting, Louvain, induced graph at the configured
/// level, and two-phase tearing. Stage failures carry the stage name.
inline PipelineResult run_pipeline(const PointCloud& pc, const PipelineConfig& cfg) {
    const auto pc_report = validate(pc);
    if (!pc_report.ok())
        throw std::invalid_argument("invalid point cloud: " + pc_report.issues.front());
    const auto cfg_report = cfg.check();
    if (!cfg_report.ok())
        throw std::invalid_argument("invalid config: " + cfg_report.issues.front());
    if (pc.count < 4) throw std::invalid_argument("input too small: need at least 4 points");

    PipelineResult result;
    RunReport& report = result.report;
    report.n = pc.count;
    report.seed = cfg.seed;

    using clock = std::chrono::steady_clock;
    const auto run_start = clock::now();
    auto timed = [&](const char* name, auto&& fn) {
        const auto begin = clock::now();
        fn();
        report.stage_times_ms[name] =
            std::chrono::duration<double, std::milli>(clock::now() - begin).count();
    };

    SampleSplit split;
    timed("sample", [&] { split = sample_points(pc, cfg, cfg.seed); });
    report.m_sampled = split.sample.size();

    NeighborGraph gm;
    timed("knn", [&] {
        const std::size_t m = split.sample.size();
        std::vector<double> sample_rows(m * pc.dim);
        for (std::size_t i = 0; i < m; ++i)
            std::copy_n(pc.row(split.sample[i]), pc.dim, sample_rows.begin() + i * pc.dim);
        const KnnResult knn =
            nn_descent_knn({sample_rows.data(), m, pc.dim}, cfg.k, cfg.seed, {}, cfg.metric,
                           cfg.threads, &report.warnings);
        gm = knn_to_graph(knn);
        gm.sample_map = split.sample;
    });

    std::vector<NodeId> nearest_sample;
    timed("witness", [&] {
        WitnessAugmentResult aug =
            witness_augment(gm, pc, split.complement, cfg.metric, cfg.threads, &report.warnings);
        gm = std::move(aug.graph);
        nearest_sample = std::move(aug.nearest_sample);
    });

    LandmarkCover cover;
    timed("landmarks", [&] { cover = select_landmarks(gm, cfg.k_prime_hops, cfg.seed); });
    report.landmarks = cover.landmarks.size();

    WalkCountMatrix counts;
    timed("walks", [&] { counts = run_walks(gm, cover, cfg, cfg.seed); });

    timed("weighting", [&] {
        const TransitionMatrix a = transition_matrix(counts, cfg.th, cfg.keep_self_transitions);
        result.landmark_graph = symmetrize(a);
    });

    Dendrogram dendrogram;
    Partition part;
    timed("louvain", [&] {
        dendrogram = louvain(result.landmark_graph, cfg.seed);
        int level = cfg.level;
        if (level > dendrogram.top_level()) {
            detail::push_warning(&report.warnings,
                                 "partition level " + std::to_string(level) +
                                     " beyond dendrogram top " +
                                     std::to_string(dendrogram.top_level()) + "; clamping");
            level = dendrogram.top_level();
        }
        part = dendrogram.at(level);
    });
    report.communities = part.community_count;

    // Raw point -> G_M node: sampled points map to their own node, witnesses
    // to their nearest sampled point.
    std::vector<NodeId> point_to_node(pc.count);
    for (std::size_t i = 0; i < split.sample.size(); ++i)
        point_to_node[split.sample[i]] = static_cast<NodeId>(i);
    for (std::size_t i = 0; i < split.complement.size(); ++i)
        point_to_node[split.complement[i]] = nearest_sample[i];

    timed("induce", [&] {
        InduceMeta meta;
        meta.cover = &cover;
        meta.point_to_node = point_to_node;
        meta.labels = pc.labels;
        result.induced = induce(result.landmark_graph, part, meta);
    });
    report.edges_induced = result.induced.graph.edge_count();

    timed("tearing", [&] {
        report.modularity_q = modularity(result.landmark_graph, part, &report.warnings);
        report.threshold_c = tearing_threshold(cfg, report.modularity_q, &report.warnings);
        if (result.induced.graph.total_weight() <= 0.0) {
            detail::push_warning(&report.warnings, "induced graph has zero weight; tearing skipped");
            result.summary.node_count = result.induced.graph.node_count;
            result.summary.nodes = result.induced.nodes;
        } else {
            const EdgeModularityTable table = edge_modularity(result.induced);
            const SpanningResult spanning = spanning_phase(result.induced, table);
            result.summary = reintroduce_loops(result.induced, spanning, report.threshold_c);
        }
    });
    report.edges_spanning = 0;
    report.edges_reinstated = 0;
    for (const SummaryEdge& e : result.summary.edges)
        (e.phase == EdgePhase::spanning ? report.edges_spanning : report.edges_reinstated) += 1;

    result.point_assignment.resize(pc.count);
    for (std::size_t p = 0; p < pc.count; ++p)
        result.point_assignment[p] = part.assignment[cover.rev_neigh[point_to_node[p]]];

    report.stage_times_ms["total"] =
        std::chrono::duration<double, std::milli>(clock::now() - run_start).count();
    return result;
}

} // namespace shapevis
