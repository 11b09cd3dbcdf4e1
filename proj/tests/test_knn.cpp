#include <catch2/catch_amalgamated.hpp>

#include "shapevis/knn.hpp"

#include "helpers.hpp"

using namespace shapevis;

namespace {
double recall_vs(const KnnResult& got, const std::vector<std::vector<Neighbor>>& exact) {
    std::size_t hits = 0, total = 0;
    for (std::size_t q = 0; q < exact.size(); ++q) {
        total += exact[q].size();
        for (const Neighbor& e : exact[q])
            for (const Neighbor& g : got.lists[q])
                if (g.id == e.id) {
                    ++hits;
                    break;
                }
    }
    return double(hits) / double(total);
}
} // namespace

TEST_CASE("exact knn on a line") {
    PointCloud pc;
    pc.count = 3;
    pc.dim = 1;
    pc.data = {0, 1, 3};
    const auto r = exact_knn(view_of(pc), 1);
    REQUIRE(r.lists[0].size() == 1);
    REQUIRE(r.lists[0][0].id == 1);
    REQUIRE(r.lists[1][0].id == 0);   // tie 1 <-> 0 vs 1 <-> ... no tie: d(1,0)=1 < d(1,3)=2
    REQUIRE(r.lists[2][0].id == 1);
    REQUIRE(r.lists[0][0].dist == Catch::Approx(1.0));
}

TEST_CASE("identical points name each other at distance zero") {
    PointCloud pc;
    pc.count = 2;
    pc.dim = 2;
    pc.data = {5, 5, 5, 5};
    const auto r = exact_knn(view_of(pc), 1);
    REQUIRE(r.lists[0][0].id == 1);
    REQUIRE(r.lists[1][0].id == 0);
    REQUIRE(r.lists[0][0].dist == 0.0);
}

TEST_CASE("k >= M clamps with a warning") {
    PointCloud pc = testutil::random_cloud(4, 2, 3);
    std::vector<std::string> warnings;
    const auto r = exact_knn(view_of(pc), 10, Metric::euclidean, 1, &warnings);
    REQUIRE(r.k == 3);
    REQUIRE(warnings.size() == 1);
    for (const auto& list : r.lists) REQUIRE(list.size() == 3);
}

TEST_CASE("exact knn matches the independent full-sort oracle") {
    const auto pc = testutil::random_cloud(100, 5, 2024);
    const auto got = exact_knn(view_of(pc), 10);
    const auto expected = testutil::oracle_knn(pc, 10);
    for (std::size_t q = 0; q < pc.count; ++q) {
        REQUIRE(got.lists[q].size() == expected[q].size());
        for (std::size_t i = 0; i < expected[q].size(); ++i) {
            REQUIRE(got.lists[q][i].id == expected[q][i].id);
            REQUIRE(got.lists[q][i].dist == Catch::Approx(expected[q][i].dist).epsilon(1e-12));
        }
    }
}

TEST_CASE("exact knn distances are sorted and dominate unlisted points") {
    const auto pc = testutil::random_cloud(60, 3, 5);
    const auto r = exact_knn(view_of(pc), 5);
    for (std::size_t q = 0; q < pc.count; ++q) {
        const auto& list = r.lists[q];
        for (std::size_t i = 1; i < list.size(); ++i) REQUIRE(list[i - 1].dist <= list[i].dist);
        // Every unlisted point is at least as far as the worst listed one.
        std::vector<char> listed(pc.count, 0);
        for (const auto& n : list) listed[n.id] = 1;
        for (std::size_t c = 0; c < pc.count; ++c) {
            if (c == q || listed[c]) continue;
            double acc = 0.0;
            for (std::size_t j = 0; j < pc.dim; ++j) {
                const double diff = pc.row(q)[j] - pc.row(c)[j];
                acc += diff * diff;
            }
            REQUIRE(std::sqrt(acc) >= list.back().dist - 1e-12);
        }
    }
}

TEST_CASE("nn-descent delegates to exact search for small inputs") {
    const auto pc = testutil::random_cloud(300, 4, 9);
    const auto approx = nn_descent_knn(view_of(pc), 6, 42);
    const auto exact = exact_knn(view_of(pc), 6);
    for (std::size_t q = 0; q < pc.count; ++q) {
        REQUIRE(approx.lists[q].size() == exact.lists[q].size());
        for (std::size_t i = 0; i < exact.lists[q].size(); ++i)
            REQUIRE(approx.lists[q][i].id == exact.lists[q][i].id);
    }
}

TEST_CASE("nn-descent reaches high recall on 5000 uniform points") {
    const auto pc = testutil::random_cloud(5000, 10, 77);
    const auto approx = nn_descent_knn(view_of(pc), 10, 1);
    const auto exact = testutil::oracle_knn(pc, 10);
    REQUIRE(recall_vs(approx, exact) >= 0.90);
}

TEST_CASE("nn-descent is deterministic and thread-count invariant") {
    const auto pc = testutil::random_cloud(1500, 6, 31);
    const auto a = nn_descent_knn(view_of(pc), 8, 5, {}, Metric::euclidean, 1);
    const auto b = nn_descent_knn(view_of(pc), 8, 5, {}, Metric::euclidean, 4);
    REQUIRE(a.lists.size() == b.lists.size());
    for (std::size_t q = 0; q < a.lists.size(); ++q) {
        REQUIRE(a.lists[q].size() == b.lists[q].size());
        for (std::size_t i = 0; i < a.lists[q].size(); ++i) {
            REQUIRE(a.lists[q][i].id == b.lists[q][i].id);
            REQUIRE(a.lists[q][i].dist == b.lists[q][i].dist);
        }
    }
}

TEST_CASE("nn-descent recall is monotone non-decreasing in iterations") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto pc = testutil::random_cloud(1400, 8, 100 + seed);
        const auto exact = testutil::oracle_knn(pc, 10);
        double prev = 0.0;
        for (unsigned iters : {1u, 3u, 6u, 10u}) {
            NnDescentParams params;
            params.iters = iters;
            params.early_exit_fraction = 0.0;   // disable early exit for the prefix property
            const auto approx = nn_descent_knn(view_of(pc), 10, seed, params);
            const double rec = recall_vs(approx, exact);
            REQUIRE(rec >= prev);
            prev = rec;
        }
        REQUIRE(prev >= 0.9);
    }
}

TEST_CASE("knn_to_graph symmetrizes by union") {
    KnnResult r;
    r.k = 1;
    r.lists = {{{1, 1.0}}, {{2, 1.0}}, {{1, 1.0}}};
    const auto g = knn_to_graph(r);
    REQUIRE(g.node_count == 3);
    REQUIRE(g.edges() == std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {1, 2}});
}

TEST_CASE("knn_to_graph deduplicates mutual pairs") {
    KnnResult r;
    r.k = 1;
    r.lists = {{{1, 1.0}}, {{0, 1.0}}};
    const auto g = knn_to_graph(r);
    REQUIRE(g.edge_count == 1);
}

TEST_CASE("knn_to_graph on a single point yields an edgeless graph") {
    KnnResult r;
    r.k = 0;
    r.lists = {{}};
    const auto g = knn_to_graph(r);
    REQUIRE(g.node_count == 1);
    REQUIRE(g.edge_count == 0);
}

TEST_CASE("graph degree lower bound") {
    const auto pc = testutil::random_cloud(50, 3, 8);
    const auto g = knn_to_graph(exact_knn(view_of(pc), 3));
    for (NodeId v = 0; v < g.node_count; ++v) REQUIRE(g.adj[v].size() >= 1);
}
