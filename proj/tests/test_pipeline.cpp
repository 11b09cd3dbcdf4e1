#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "shapevis/io.hpp"
#include "shapevis/metrics.hpp"
#include "shapevis/pipeline.hpp"
#include "shapevis/synth.hpp"

#include "helpers.hpp"

using namespace shapevis;

namespace {
std::string summary_bytes(const PipelineResult& r) {
    return detail::summary_to_json(r.summary, &r.point_assignment).dump(2);
}
} // namespace

TEST_CASE("well-separated blobs give two components with distinct labels") {
    const auto pc = gen_blobs(2000, 50, 2, 1.0, 20.0, 11);
    PipelineConfig cfg;
    cfg.seed = 11;
    const auto result = run_pipeline(pc, cfg);

    REQUIRE(component_count(result.summary) == 2);
    REQUIRE(result.summary.node_count >= 2);

    // Aggregate histograms per component; dominant labels must differ.
    std::vector<NodeId> comp(result.summary.node_count, 0);
    {
        std::vector<std::vector<NodeId>> adj(result.summary.node_count);
        for (const auto& e : result.summary.edges) {
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
        NodeId next = 0;
        std::vector<char> seen(result.summary.node_count, 0);
        for (NodeId s = 0; s < result.summary.node_count; ++s) {
            if (seen[s]) continue;
            std::vector<NodeId> stack{s};
            seen[s] = 1;
            while (!stack.empty()) {
                const NodeId u = stack.back();
                stack.pop_back();
                comp[u] = next;
                for (NodeId v : adj[u])
                    if (!seen[v]) {
                        seen[v] = 1;
                        stack.push_back(v);
                    }
            }
            ++next;
        }
    }
    std::map<NodeId, NodeMeta> per_comp;
    for (std::size_t i = 0; i < result.summary.node_count; ++i)
        for (const auto& [label, count] : result.summary.nodes[i].label_histogram)
            per_comp[comp[i]].label_histogram[label] += count;
    REQUIRE(per_comp.size() == 2);
    const auto a = dominant_label(per_comp[0]);
    const auto b = dominant_label(per_comp[1]);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    REQUIRE(*a != *b);
}

TEST_CASE("annulus with reinstate-all contains a cycle, with none stays acyclic") {
    const auto pc = gen_annulus(1500, 0.05, 5);
    PipelineConfig cfg;
    cfg.seed = 5;
    cfg.tearing = TearingMode::all;
    const auto loops = run_pipeline(pc, cfg);
    REQUIRE(testutil::has_cycle(loops.summary));

    cfg.tearing = TearingMode::none;
    const auto forest = run_pipeline(pc, cfg);
    REQUIRE_FALSE(testutil::has_cycle(forest.summary));
    REQUIRE(forest.summary.edges.size() ==
            forest.summary.node_count - component_count(forest.summary));
}

TEST_CASE("pipeline is deterministic for a fixed seed across thread counts") {
    const auto pc = gen_blobs(800, 10, 2, 1.0, 20.0, 3);
    PipelineConfig cfg;
    cfg.seed = 42;
    cfg.threads = 1;
    const auto a = run_pipeline(pc, cfg);
    cfg.threads = 4;
    const auto b = run_pipeline(pc, cfg);
    REQUIRE(summary_bytes(a) == summary_bytes(b));

    cfg.seed = 43;
    const auto c = run_pipeline(pc, cfg);
    REQUIRE(summary_bytes(a) != summary_bytes(c));
}

TEST_CASE("tiny inputs are rejected") {
    const auto pc = testutil::random_cloud(3, 2, 1);
    PipelineConfig cfg;
    REQUIRE_THROWS_WITH(run_pipeline(pc, cfg), Catch::Matchers::ContainsSubstring("too small"));
}

TEST_CASE("invalid config is rejected") {
    const auto pc = testutil::random_cloud(100, 3, 1);
    PipelineConfig cfg;
    cfg.m_fraction = 2.0;
    REQUIRE_THROWS_WITH(run_pipeline(pc, cfg), Catch::Matchers::ContainsSubstring("m_fraction"));
}

TEST_CASE("every raw point is accounted for exactly once") {
    const auto pc = gen_blobs(900, 8, 3, 1.0, 15.0, 7);
    PipelineConfig cfg;
    cfg.seed = 7;
    const auto result = run_pipeline(pc, cfg);

    std::uint64_t total = 0;
    for (const auto& node : result.summary.nodes) total += node.point_count;
    REQUIRE(total == pc.count);

    // The point assignment agrees with the per-node counts.
    REQUIRE(result.point_assignment.size() == pc.count);
    std::vector<std::uint64_t> counts(result.summary.node_count, 0);
    for (NodeId node : result.point_assignment) {
        REQUIRE(node < result.summary.node_count);
        ++counts[node];
    }
    for (std::size_t i = 0; i < counts.size(); ++i)
        REQUIRE(counts[i] == result.summary.nodes[i].point_count);

    // Label histograms cover all points.
    std::uint64_t labeled = 0;
    for (const auto& node : result.summary.nodes)
        for (const auto& [label, count] : node.label_histogram) labeled += count;
    REQUIRE(labeled == pc.count);
}

TEST_CASE("run report carries the documented keys and consistent times") {
    const auto pc = gen_blobs(1200, 16, 2, 1.0, 20.0, 2);
    PipelineConfig cfg;
    cfg.seed = 2;
    const auto result = run_pipeline(pc, cfg);
    const nlohmann::json j = report_json(result.report);
    for (const char* key :
         {"stage_times_ms", "n", "m_sampled", "landmarks", "communities", "edges_induced",
          "edges_spanning", "edges_reinstated", "modularity_q", "threshold_c", "seed"})
        REQUIRE(j.contains(key));
    REQUIRE(j["n"] == 1200);
    REQUIRE(j["m_sampled"] == 400);
    REQUIRE(j["seed"] == 2);

    double stage_sum = 0.0, total = 0.0;
    for (const auto& [name, ms] : result.report.stage_times_ms) {
        if (name == "total")
            total = ms;
        else
            stage_sum += ms;
    }
    REQUIRE(total > 0.0);
    REQUIRE(stage_sum <= total);
    REQUIRE(stage_sum >= 0.95 * total);
}

TEST_CASE("summary edges subset induced edges and components are preserved") {
    const auto pc = gen_sphere(1200, 5, 9);
    PipelineConfig cfg;
    cfg.seed = 9;
    const auto result = run_pipeline(pc, cfg);
    REQUIRE(component_count(result.summary) == component_count(result.induced.graph));
    for (const auto& e : result.summary.edges) {
        REQUIRE(result.induced.graph.edge_weight(e.u, e.v) == e.weight);
    }
    REQUIRE(result.summary.edges.size() <= result.induced.graph.edge_count());
}

TEST_CASE("metrics flow from a pipeline result") {
    const auto pc = gen_blobs(600, 12, 2, 1.0, 20.0, 21);
    PipelineConfig cfg;
    cfg.seed = 21;
    const auto result = run_pipeline(pc, cfg);
    const Partition segments = pseudo_label(result.summary, cfg.seed);
    const auto per_point = point_segments(segments, result.point_assignment);
    const double cosine = avg_intra_segment_cosine(pc, per_point);
    REQUIRE(cosine >= -1.0);
    REQUIRE(cosine <= 1.0);
    REQUIRE(segments.community_count >= component_count(result.summary));
}
