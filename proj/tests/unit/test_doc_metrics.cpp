#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cohesia/doc_metrics.hpp"
#include "cohesia/error.hpp"
#include "oracles.hpp"

using namespace cohesia;

namespace {

LayerNetwork layer_of(std::size_t section, std::size_t n, std::vector<graph::Edge> edges) {
  LayerNetwork l;
  l.section_index = section;
  for (std::size_t i = 0; i < n; ++i) l.entities.push_back("e" + std::to_string(i));
  l.graph = graph::WeightedGraph::from_edges(n, edges);
  return l;
}

std::vector<graph::Edge> complete_edges(std::size_t n, double w = 1.0) {
  std::vector<graph::Edge> e;
  for (graph::NodeId u = 0; u < n; ++u)
    for (graph::NodeId v = u + 1; v < n; ++v) e.push_back({u, v, w});
  return e;
}

MetaLayer meta_layer(std::size_t section, std::uint32_t concepts) {
  MetaLayer l{section, {}};
  for (std::uint32_t c = 0; c < concepts; ++c) l.concepts.push_back({c, {"c" + std::to_string(c)}});
  return l;
}

void connect_all(Metagraph& m, std::size_t layer, double w) {
  const auto n = static_cast<std::uint32_t>(m.layers[layer].concepts.size());
  for (std::uint32_t r = 0; r < n; ++r)
    for (std::uint32_t s = r + 1; s < n; ++s) m.intralayer.push_back({layer, r, s, w, 1, 0});
}

}  // namespace

TEST(Eci, Examples) {
  std::vector<LayerNetwork> complete = {layer_of(1, 4, complete_edges(4)), layer_of(2, 5, complete_edges(5, 3.0))};
  EXPECT_DOUBLE_EQ(compute_eci(std::span<const LayerNetwork>(complete)), 0.0);

  std::vector<LayerNetwork> star = {layer_of(1, 4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}), layer_of(2, 2, {{0, 1, 1}})};
  EXPECT_DOUBLE_EQ(compute_eci(std::span<const LayerNetwork>(star)), 1.0);

  std::vector<LayerTerms> terms = {{1, 3, 1.0, 1.0}, {2, 3, 0.5, 1.0}};
  EXPECT_NEAR(compute_eci(terms), std::sqrt(0.125), 1e-15);
  EXPECT_NEAR(compute_eci(terms), 0.3536, 5e-5);
}

TEST(Eci, NoLayersAndPermutationInvariance) {
  try {
    compute_eci(std::span<const LayerTerms>());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoLayers);
  }
  std::mt19937_64 rng(51);
  std::vector<LayerNetwork> layers;
  for (int i = 0; i < 6; ++i) {
    auto g = oracle::random_graph(rng, 2 + rng() % 9, 0.5, 3);
    LayerNetwork l;
    l.section_index = static_cast<std::size_t>(i + 1);
    l.graph = g;
    layers.push_back(l);
  }
  auto terms = layer_terms(layers);
  const double eci = compute_eci(terms);
  const double epi = compute_epi(terms).value;
  std::shuffle(terms.begin(), terms.end(), rng);
  EXPECT_NEAR(compute_eci(terms), eci, 1e-15);
  EXPECT_NEAR(compute_epi(terms).value, epi, 1e-15);
  double sq = 0.0;
  for (const auto& t : terms) sq += (1 - t.wcc) * (1 - t.wcc);
  EXPECT_NEAR(eci * eci * static_cast<double>(terms.size()), sq, 1e-12);
}

TEST(Epi, Examples) {
  std::vector<LayerNetwork> k3 = {layer_of(1, 3, complete_edges(3))};
  EXPECT_NEAR(compute_epi(std::span<const LayerNetwork>(k3)).value, std::abs(std::log(3.0) - 1.0), 1e-15);
  EXPECT_NEAR(compute_epi(std::span<const LayerNetwork>(k3)).value, 0.0986, 5e-5);

  std::vector<LayerNetwork> disjoint = {layer_of(1, 4, {{0, 1, 1}, {2, 3, 1}})};
  EXPECT_NEAR(compute_epi(std::span<const LayerNetwork>(disjoint)).value, std::abs(std::log(4.0) - 3.0), 1e-15);
  EXPECT_NEAR(compute_epi(std::span<const LayerNetwork>(disjoint)).value, 1.6137, 5e-5);

  std::vector<LayerTerms> ideal = {{1, 5, 0.5, std::log(5.0)}};
  EXPECT_DOUBLE_EQ(compute_epi(ideal).value, 0.0);
}

TEST(Epi, SmallLayersAreExcluded) {
  std::vector<LayerNetwork> layers = {layer_of(1, 3, complete_edges(3)), layer_of(2, 1, {})};
  auto r = compute_epi(std::span<const LayerNetwork>(layers));
  EXPECT_EQ(r.layers_used, 1u);
  EXPECT_EQ(r.excluded_sections, (std::vector<std::size_t>{2}));
  EXPECT_NEAR(r.value, std::abs(std::log(3.0) - 1.0), 1e-15);
}

TEST(Cci, NoPruningIsZero) {
  Metagraph m;
  m.layers = {meta_layer(1, 5)};
  connect_all(m, 0, 2.0);
  auto r = compute_cci(m, m);
  EXPECT_EQ(r.k4_before, 5u);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
}

TEST(Cci, DestroyingAllCliquesIsOne) {
  Metagraph before;
  before.layers = {meta_layer(1, 4)};
  connect_all(before, 0, 2.0);
  Metagraph after = before;
  after.intralayer.pop_back();
  auto r = compute_cci(before, after);
  EXPECT_EQ(r.k4_after, 0u);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
}

TEST(Cci, TenToSevenFixture) {
  // Two K5 layers (5 + 5 four-cliques); pruning one edge of the second K5
  // leaves K5 - e with 2 four-cliques, so K4 goes 10 -> 7.
  Metagraph m;
  m.layers = {meta_layer(1, 5), meta_layer(2, 5)};
  connect_all(m, 0, 10.0);
  connect_all(m, 1, 10.0);
  m.intralayer.back().weight = 0.1;
  auto [after, th] = prune(m);
  ASSERT_EQ(after.pruned.size(), 1u);
  EXPECT_EQ(oracle::k4_count(oracle::dense(flatten(m))), 10u);
  EXPECT_EQ(oracle::k4_count(oracle::dense(flatten(after))), 7u);
  auto r = compute_cci(m, after);
  EXPECT_EQ(r.k4_before, 10u);
  EXPECT_EQ(r.k4_after, 7u);
  EXPECT_NEAR(r.value, 0.3, 1e-15);
}

TEST(Cci, NoBaseline) {
  Metagraph m;
  m.layers = {meta_layer(1, 3)};
  connect_all(m, 0, 2.0);
  auto r = compute_cci(m, m);
  EXPECT_TRUE(r.no_k4_baseline);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
}

TEST(Ici, Examples) {
  Metagraph all;
  all.layers = {meta_layer(1, 3), meta_layer(2, 2)};
  connect_all(all, 0, 1.0);
  connect_all(all, 1, 1.0);
  EXPECT_DOUBLE_EQ(compute_ici(all).value, 0.0);

  Metagraph one;
  one.layers = {meta_layer(1, 4)};
  one.intralayer = {{0, 0, 1, 1.0, 1, 0}, {0, 1, 2, 1.0, 1, 0}};
  auto r = compute_ici(one);
  EXPECT_DOUBLE_EQ(r.value, 0.25);
  EXPECT_EQ(r.per_layer[0].isolated, (std::vector<std::uint32_t>{3}));
}

TEST(Ici, SingleConceptLayerIsIsolatedAndFlagged) {
  Metagraph m;
  m.layers = {meta_layer(1, 1), meta_layer(2, 2)};
  m.intralayer = {{1, 0, 1, 1.0, 1, 0}};
  auto r = compute_ici(m);
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(r.per_layer[0].single_concept_layer);
  EXPECT_FALSE(r.per_layer[1].single_concept_layer);
}

TEST(Ici, NoMetanodes) {
  try {
    compute_ici(Metagraph{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoMetanodes);
  }
}

TEST(Ici, RemovingMetaedgesNeverLowersIciOrRaisesK4) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 50; ++t) {
    Metagraph m;
    m.layers = {meta_layer(1, 6), meta_layer(2, 5)};
    for (std::size_t l = 0; l < 2; ++l) {
      const auto n = static_cast<std::uint32_t>(m.layers[l].concepts.size());
      for (std::uint32_t r = 0; r < n; ++r)
        for (std::uint32_t s = r + 1; s < n; ++s)
          if (rng() % 3) m.intralayer.push_back({l, r, s, 1.0, 1, 0});
    }
    for (std::uint32_t r = 0; r < 6; ++r)
      for (std::uint32_t s = 0; s < 5; ++s)
        if (rng() % 4 == 0) m.interlayer.push_back({0, r, s, 0.8});
    Metagraph fewer = m;
    if (!fewer.intralayer.empty()) fewer.intralayer.erase(fewer.intralayer.begin() + static_cast<long>(rng() % fewer.intralayer.size()));
    EXPECT_GE(compute_ici(fewer).value, compute_ici(m).value);
    EXPECT_LE(graph::count_k4(flatten(fewer)), graph::count_k4(flatten(m)));
  }
}

TEST(DocumentMetricsTest, IdealDocument) {
  std::vector<LayerNetwork> layers = {layer_of(1, 4, complete_edges(4, 2.0)), layer_of(2, 4, complete_edges(4, 2.0))};
  auto terms = layer_terms(layers);
  Metagraph m;
  m.layers = {meta_layer(1, 2), meta_layer(2, 2)};
  connect_all(m, 0, 1.0);
  connect_all(m, 1, 1.0);
  auto d = compute_document_metrics(terms, m, m);
  EXPECT_DOUBLE_EQ(d.eci, 0.0);
  EXPECT_DOUBLE_EQ(d.cci, 0.0);
  EXPECT_DOUBLE_EQ(d.ici, 0.0);
  EXPECT_NEAR(d.epi, std::abs(std::log(4.0) - 1.0), 1e-15);
  ASSERT_EQ(d.per_layer.size(), 2u);
  EXPECT_NEAR(*d.per_layer[0].deviation, std::log(4.0) - 1.0, 1e-15);
  EXPECT_EQ(d.annotations, (std::vector<std::string>{"no-k4-baseline"}));
}

TEST(DocumentMetricsTest, LayerCountMismatch) {
  std::vector<LayerTerms> terms = {{1, 2, 0.0, 1.0}};
  Metagraph m;
  EXPECT_THROW(compute_document_metrics(terms, m, m), Error);
}
