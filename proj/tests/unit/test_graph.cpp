#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "cohesia/error.hpp"
#include "cohesia/graph.hpp"
#include "oracles.hpp"

using namespace cohesia;
using namespace cohesia::graph;

namespace {

WeightedGraph make(std::size_t n, std::vector<Edge> edges) { return WeightedGraph::from_edges(n, edges); }

WeightedGraph complete(std::size_t n, double w = 1.0) {
  std::vector<Edge> e;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) e.push_back({u, v, w});
  return make(n, e);
}

WeightedGraph relabel(const WeightedGraph& g, const std::vector<NodeId>& perm) {
  std::vector<Edge> e;
  for (const auto& x : g.edges()) {
    auto a = perm[x.u], b = perm[x.v];
    e.push_back({std::min(a, b), std::max(a, b), x.weight});
  }
  return make(g.node_count(), e);
}

}  // namespace

TEST(WeightedGraphTest, RejectsInvalidEdges) {
  for (auto bad : std::vector<std::vector<Edge>>{{{0, 0, 1}}, {{0, 1, 1}, {1, 0, 2}}, {{0, 5, 1}}, {{0, 1, 0}},
                                                 {{0, 1, -2}}}) {
    try {
      make(3, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidGraph);
    }
  }
}

TEST(WeightedGraphTest, Accessors) {
  auto g = make(4, {{2, 0, 2.0}, {0, 1, 1.0}, {1, 2, 3.0}});
  EXPECT_EQ(g.node_count(), 4u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_DOUBLE_EQ(g.strength(2), 5.0);
  EXPECT_DOUBLE_EQ(g.weight(2, 1), 3.0);
  EXPECT_FALSE(g.has_edge(0, 3));
  EXPECT_DOUBLE_EQ(g.total_weight(), 6.0);
  auto nb = g.neighbors(0);
  ASSERT_EQ(nb.size(), 2u);
  EXPECT_LT(nb[0].node, nb[1].node);
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1, 1.0}, {0, 2, 2.0}, {1, 2, 3.0}}));
}

TEST(GraphBuilderTest, AccumulatesBothOrientations) {
  GraphBuilder b(3);
  b.add_weight(0, 1, 1);
  b.add_weight(1, 0, 1);
  b.add_weight(2, 1, 1);
  auto g = b.build();
  EXPECT_DOUBLE_EQ(g.weight(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(g.weight(1, 2), 1.0);
}

TEST(Components, Examples) {
  EXPECT_EQ(connected_components(complete(3)).size(), 1u);
  auto two = connected_components(make(4, {{0, 1, 1}, {2, 3, 1}}));
  EXPECT_EQ(two, (std::vector<std::vector<NodeId>>{{0, 1}, {2, 3}}));
  EXPECT_TRUE(connected_components(WeightedGraph()).empty());
  EXPECT_EQ(connected_components(WeightedGraph(3)).size(), 3u);
}

TEST(Components, SizesSumToN) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    auto g = oracle::random_graph(rng, 1 + rng() % 15, 0.15);
    std::size_t total = 0;
    for (const auto& c : connected_components(g)) total += c.size();
    EXPECT_EQ(total, g.node_count());
  }
}

TEST(Clustering, CompleteAndStar) {
  EXPECT_DOUBLE_EQ(weighted_clustering(complete(4)), 1.0);
  EXPECT_DOUBLE_EQ(weighted_clustering(complete(4, 2.5)), 1.0);
  EXPECT_DOUBLE_EQ(weighted_clustering(make(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}})), 0.0);
  EXPECT_DOUBLE_EQ(weighted_clustering(WeightedGraph()), 0.0);
}

TEST(Clustering, TriangleWithPendant) {
  // a=0 in triangle {0,1,2}, pendant 3 on a. Per-node Barrat values by hand:
  // a: k=3, s=3, closed ordered pairs (b,c),(c,b) each (1+1)/2 -> 2/(3*2) = 1/3.
  auto g = make(4, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {0, 3, 1}});
  auto per_node = node_weighted_clustering(g);
  EXPECT_NEAR(per_node[0], 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(per_node[1], 1.0);
  EXPECT_DOUBLE_EQ(per_node[2], 1.0);
  EXPECT_DOUBLE_EQ(per_node[3], 0.0);
  EXPECT_NEAR(weighted_clustering(g), 7.0 / 12.0, 1e-15);
}

TEST(Clustering, WeightsShiftTowardHeavyTriangles) {
  // Node 0 has a heavy closed pair and a light open edge.
  auto g = make(4, {{0, 1, 4}, {0, 2, 4}, {1, 2, 1}, {0, 3, 1}});
  auto per_node = node_weighted_clustering(g);
  // s = 9, k = 3: 2 * (4+4)/2 / (9*2)
  EXPECT_NEAR(per_node[0], 8.0 / 18.0, 1e-15);
}

TEST(Clustering, EqualWeightsMatchUnweightedOracle) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 14;
    auto g = oracle::random_graph(rng, n, 0.45);
    const double expected = oracle::unweighted_clustering(oracle::dense(g));
    EXPECT_NEAR(weighted_clustering(g), expected, 1e-12);
    EXPECT_NEAR(serial::weighted_clustering(g), expected, 1e-12);
  }
}

TEST(Clustering, ParallelMatchesSerialOnWeightedGraphs) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 50; ++t) {
    auto g = oracle::random_graph(rng, 5 + rng() % 60, 0.3, 9);
    const double w = weighted_clustering(g);
    EXPECT_NEAR(w, serial::weighted_clustering(g), 1e-12);
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
  }
}

TEST(Apl, Examples) {
  EXPECT_DOUBLE_EQ(average_path_length(complete(5)), 1.0);
  EXPECT_DOUBLE_EQ(average_path_length(make(3, {{0, 1, 1}, {1, 2, 1}})), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(average_path_length(make(4, {{0, 1, 1}, {2, 3, 1}})), 3.0);
  // all isolated: every pair is unreachable
  EXPECT_DOUBLE_EQ(average_path_length(WeightedGraph(3)), 3.0);
  // weights are ignored
  EXPECT_DOUBLE_EQ(average_path_length(make(3, {{0, 1, 9}, {1, 2, 0.5}})), 4.0 / 3.0);
}

TEST(Apl, TooFewNodes) {
  for (std::size_t n : {0u, 1u}) {
    try {
      average_path_length(WeightedGraph(n));
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::TooFewNodes);
    }
  }
}

TEST(Apl, MatchesFloydWarshall) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 150; ++t) {
    auto g = oracle::random_graph(rng, 2 + rng() % 20, 0.12 + 0.3 * static_cast<double>(t % 3) / 2.0, 5);
    const double expected = oracle::apl_floyd(oracle::dense(g));
    EXPECT_NEAR(average_path_length(g), expected, 1e-12);
    EXPECT_NEAR(serial::average_path_length(g), expected, 1e-12);
    if (g.edge_count() > 0) {
      EXPECT_GE(average_path_length(g), 1.0);
    }
  }
}

TEST(K4, Examples) {
  EXPECT_EQ(count_k4(complete(5)), 5u);
  EXPECT_EQ(count_k4(complete(4)), 1u);
  EXPECT_EQ(count_k4(complete(3)), 0u);
  // bipartite graphs are triangle-free
  std::vector<Edge> e;
  for (NodeId u = 0; u < 4; ++u)
    for (NodeId v = 4; v < 8; ++v) e.push_back({u, v, 1});
  EXPECT_EQ(count_k4(make(8, e)), 0u);
  EXPECT_EQ(count_k4(WeightedGraph()), 0u);
}

TEST(K4, MatchesBruteForceAndRelabeling) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    auto g = oracle::random_graph(rng, 1 + rng() % 12, 0.3 + 0.5 * (rng() % 100) / 100.0);
    const auto expected = oracle::k4_count(oracle::dense(g));
    EXPECT_EQ(count_k4(g), expected);
    EXPECT_EQ(serial::count_k4(g), expected);
    std::vector<NodeId> perm(g.node_count());
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(count_k4(relabel(g, perm)), expected);
  }
}

TEST(Degeneracy, OrderIsPermutation) {
  std::mt19937_64 rng(8);
  auto g = oracle::random_graph(rng, 30, 0.2);
  auto order = degeneracy_order(g);
  std::sort(order.begin(), order.end());
  std::vector<NodeId> expected(30);
  std::iota(expected.begin(), expected.end(), 0u);
  EXPECT_EQ(order, expected);
}

TEST(Modularity, MatchesOracle) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 50; ++t) {
    auto g = oracle::random_graph(rng, 2 + rng() % 10, 0.4, 4);
    std::vector<std::uint32_t> assign(g.node_count());
    std::vector<int> c(g.node_count());
    for (std::size_t i = 0; i < assign.size(); ++i) c[i] = static_cast<int>(assign[i] = rng() % 3);
    EXPECT_NEAR(modularity(g, assign), oracle::modularity(oracle::dense(g), c), 1e-12);
  }
  EXPECT_DOUBLE_EQ(modularity(WeightedGraph(3), std::vector<std::uint32_t>{0, 1, 2}), 0.0);
}
