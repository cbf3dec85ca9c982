#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohesia/graph.hpp"
#include "cohesia/section_layer.hpp"
#include "cohesia/semantics.hpp"

namespace cohesia {

/// Cosine similarity at or above which an interlayer entity edge is kept.
inline constexpr double kInterlayerCutoff = 0.5;

struct InterlayerEdge {
  graph::NodeId from = 0;  // node in layer alpha
  graph::NodeId to = 0;    // node in layer alpha + 1
  double weight = 0.0;     // cosine in [0.5, 1]
};

struct MultilayerNetwork {
  std::vector<LayerNetwork> layers;
  std::vector<std::vector<InterlayerEdge>> interlayer;  // interlayer[a] joins layers a and a+1 (0-based)
};

/// Embeddings per layer, keyed by entity.
using LayerEmbeddings = std::map<std::string, std::vector<double>>;

/// Keeps every cross-layer entity pair with cosine >= 0.5. Throws MissingEmbedding.
MultilayerNetwork build_interlayer(std::vector<LayerNetwork> layers, std::span<const LayerEmbeddings> embeddings);

struct Concept {
  std::uint32_t id = 0;
  std::vector<std::string> members;
};

struct MetaLayer {
  std::size_t section_index = 0;
  std::vector<Concept> concepts;
};

struct IntralayerMetaedge {
  std::size_t layer = 0;  // 0-based position in Metagraph::layers
  std::uint32_t r = 0;
  std::uint32_t s = 0;    // r < s
  double weight = 0.0;    // ln(sum of member edge weights) * edge count
  std::size_t edge_count = 0;
  double weight_sum = 0.0;
};

struct InterlayerMetaedge {
  std::size_t layer = 0;  // source layer alpha; target is alpha + 1
  std::uint32_t r = 0;    // concept in alpha
  std::uint32_t s = 0;    // concept in alpha + 1
  double weight = 0.0;    // sum of member interlayer cosines
};

enum class MetaedgeKind { intralayer, interlayer };

struct PrunedMetaedge {
  MetaedgeKind kind = MetaedgeKind::intralayer;
  std::size_t layer = 0;
  std::uint32_t r = 0;
  std::size_t other_layer = 0;  // equals layer for intralayer edges
  std::uint32_t s = 0;
  double weight = 0.0;
  double fence = 0.0;
};

struct Metagraph {
  std::vector<MetaLayer> layers;
  std::vector<IntralayerMetaedge> intralayer;
  std::vector<InterlayerMetaedge> interlayer;
  std::vector<PrunedMetaedge> pruned;

  std::size_t metanode_count() const;
};

struct PruningThresholds {
  std::optional<double> intralayer_lambda;  // absent when there was nothing to fence
  std::optional<double> interlayer_lambda;
};

/// Louvain per layer (in parallel), then metaedge weights per community pair.
/// Throws EmptyLayer.
Metagraph condense(const MultilayerNetwork& mln, std::uint64_t seed);

/// Intralayer metaedge weight; 0 (absent) when the member-edge sum is <= 1.
double intralayer_metaedge_weight(double weight_sum, std::size_t edge_count);

/// Drops metaedges strictly below the document-wide lower fence of their kind.
std::pair<Metagraph, PruningThresholds> prune(const Metagraph& meta);

/// Flattened simple graph over all metanodes (weights ignored); node ids follow
/// layer order then concept id.
graph::WeightedGraph flatten(const Metagraph& meta);

nlohmann::json to_json(const Metagraph& meta);
Metagraph metagraph_from_json(const nlohmann::json& j);

}  // namespace cohesia
