#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "shapevis/knn.hpp"
#include "shapevis/witness.hpp"

#include "helpers.hpp"

using namespace shapevis;

namespace {
// Base graph + complement for oracle comparisons: the first `m` rows of the
// cloud are the sample, the rest are witnesses.
struct Instance {
    PointCloud pc;
    NeighborGraph graph;
    std::vector<NodeId> sample, complement;
};

Instance make_instance(std::size_t n, std::size_t m, std::size_t d, std::uint64_t seed) {
    Instance inst;
    inst.pc = testutil::random_cloud(n, d, seed);
    for (std::size_t i = 0; i < n; ++i)
        (i < m ? inst.sample : inst.complement).push_back(static_cast<NodeId>(i));
    std::vector<double> rows(m * d);
    for (std::size_t i = 0; i < m; ++i)
        std::copy_n(inst.pc.row(i), d, rows.begin() + i * d);
    inst.graph = knn_to_graph(exact_knn({rows.data(), m, d}, 4));
    inst.graph.sample_map = inst.sample;
    return inst;
}
} // namespace

TEST_CASE("sample size follows min(m_cap, ceil(N * fraction))") {
    PipelineConfig cfg;

    PointCloud pc9 = testutil::random_cloud(9, 2, 1);
    auto split = sample_points(pc9, cfg, 7);
    REQUIRE(split.sample.size() == 3);
    REQUIRE(split.complement.size() == 6);

    PointCloud pc2 = testutil::random_cloud(2, 2, 1);
    cfg.m_cap = 1;
    split = sample_points(pc2, cfg, 7);
    REQUIRE(split.sample.size() == 1);
    REQUIRE(split.complement.size() == 1);
}

TEST_CASE("sampling is uniform without replacement and deterministic") {
    PipelineConfig cfg;
    const PointCloud pc = testutil::random_cloud(100, 2, 1);
    const auto a = sample_points(pc, cfg, 42);
    const auto b = sample_points(pc, cfg, 42);
    REQUIRE(a.sample == b.sample);
    REQUIRE(a.complement == b.complement);

    std::set<NodeId> all(a.sample.begin(), a.sample.end());
    all.insert(a.complement.begin(), a.complement.end());
    REQUIRE(all.size() == 100);

    const auto c = sample_points(pc, cfg, 43);
    REQUIRE(a.sample != c.sample);   // different seed, different draw
}

TEST_CASE("witness augmentation with an empty complement changes nothing") {
    auto inst = make_instance(50, 50, 3, 11);
    const auto before = inst.graph.edges();
    const auto result = witness_augment(inst.graph, inst.pc, {});
    REQUIRE(result.graph.edges() == before);
}

TEST_CASE("a lone witness bridges its two nearest samples") {
    PointCloud pc;
    pc.count = 3;
    pc.dim = 1;
    pc.data = {0, 10, 5};
    NeighborGraph g;
    g.resize(2);
    g.sample_map = {0, 1};
    const auto result = witness_augment(g, pc, {2});
    REQUIRE(result.graph.edge_count == 1);
    REQUIRE(result.graph.has_edge(0, 1));
    REQUIRE(result.nearest_sample == std::vector<NodeId>{0});   // tie at distance 5 -> smaller id
}

TEST_CASE("witness augmentation equals the exhaustive 2-NN oracle") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto inst = make_instance(600, 200, 3, 1000 + seed);
        const auto result = witness_augment(inst.graph, inst.pc, inst.complement);

        std::set<std::pair<NodeId, NodeId>> expected;
        for (const auto& e : inst.graph.edges()) expected.insert(e);
        for (std::size_t w = 0; w < inst.complement.size(); ++w) {
            const auto [p, q] =
                testutil::oracle_witness_2nn(inst.pc, inst.sample, inst.complement[w]);
            expected.insert({std::min(p, q), std::max(p, q)});
            REQUIRE(result.nearest_sample[w] == p);
        }
        const auto got = result.graph.edges();
        REQUIRE(std::set<std::pair<NodeId, NodeId>>(got.begin(), got.end()) == expected);
    }
}

TEST_CASE("witness augmentation is monotone and idempotent") {
    auto inst = make_instance(300, 100, 4, 21);
    const auto once = witness_augment(inst.graph, inst.pc, inst.complement);
    REQUIRE(once.graph.edge_count >= inst.graph.edge_count);
    for (const auto& e : inst.graph.edges()) REQUIRE(once.graph.has_edge(e.first, e.second));

    const auto twice = witness_augment(once.graph, inst.pc, inst.complement);
    REQUIRE(twice.graph.edges() == once.graph.edges());
}

TEST_CASE("witness augmentation warns and skips below two samples") {
    PointCloud pc;
    pc.count = 2;
    pc.dim = 1;
    pc.data = {0, 1};
    NeighborGraph g;
    g.resize(1);
    g.sample_map = {0};
    std::vector<std::string> warnings;
    const auto result = witness_augment(g, pc, {1}, Metric::euclidean, 1, &warnings);
    REQUIRE(result.graph.edge_count == 0);
    REQUIRE(warnings.size() == 1);
}

TEST_CASE("landmarks on an edgeless graph are all nodes") {
    NeighborGraph g;
    g.resize(4);
    const auto cover = select_landmarks(g, 1, 9);
    REQUIRE(cover.landmarks.size() == 4);
    for (NodeId v = 0; v < 4; ++v)
        REQUIRE(cover.landmarks[cover.rev_neigh[v]] == v);   // identity cover
}

TEST_CASE("path graph covered from its middle") {
    NeighborGraph g;
    g.resize(3);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    // Hunt for a seed whose first pick is the middle node; the cover rule
    // then forces a single landmark.
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        const auto cover = select_landmarks(g, 1, seed);
        if (cover.landmarks.front() != 1) continue;
        REQUIRE(cover.landmarks == std::vector<NodeId>{1});
        REQUIRE(cover.rev_neigh == std::vector<NodeId>{0, 0, 0});
        return;
    }
    FAIL("no seed picked the middle node first");
}

TEST_CASE("landmark cover partitions random graphs") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto g = testutil::random_graph(1000, 0.008, 500 + seed);
        const auto cover = select_landmarks(g, 1, seed);

        // Every landmark maps to itself.
        for (std::size_t i = 0; i < cover.landmarks.size(); ++i)
            REQUIRE(cover.rev_neigh[cover.landmarks[i]] == i);
        // Assignment is total and neighborhoods are disjoint by construction;
        // verify the preimages partition the node set.
        std::vector<std::size_t> counts(cover.landmarks.size(), 0);
        for (NodeId v = 0; v < g.node_count; ++v) {
            REQUIRE(cover.rev_neigh[v] < cover.landmarks.size());
            ++counts[cover.rev_neigh[v]];
        }
        std::size_t total = 0;
        for (std::size_t c : counts) {
            REQUIRE(c >= 1);
            total += c;
        }
        REQUIRE(total == g.node_count);

        // Every covered node lies within 1 hop of its landmark.
        for (NodeId v = 0; v < g.node_count; ++v) {
            const NodeId lm = cover.landmarks[cover.rev_neigh[v]];
            if (lm == v) continue;
            REQUIRE(g.has_edge(lm, v));
        }

        // Sanity bounds on the landmark count.
        std::size_t maxdeg = 0;
        for (NodeId v = 0; v < g.node_count; ++v) maxdeg = std::max(maxdeg, g.adj[v].size());
        REQUIRE(cover.landmarks.size() >= g.node_count / (maxdeg + 1));
        REQUIRE(cover.landmarks.size() <= g.node_count);
    }
}

TEST_CASE("two-hop cover reaches farther") {
    NeighborGraph g;
    g.resize(5);
    for (NodeId v = 0; v + 1 < 5; ++v) g.add_edge(v, v + 1);
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        const auto cover = select_landmarks(g, 2, seed);
        if (cover.landmarks.front() != 2) continue;
        REQUIRE(cover.landmarks == std::vector<NodeId>{2});   // middle covers the whole path
        return;
    }
    FAIL("no seed picked the middle node first");
}
