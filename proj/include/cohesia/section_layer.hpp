#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cohesia/corpus_io.hpp"
#include "cohesia/graph.hpp"
#include "cohesia/semantics.hpp"
#include "cohesia/stats.hpp"
#include "cohesia/wordlists.hpp"

namespace cohesia {

/// Key-entities of one section. `entities` is sorted; node ids in a layer
/// graph index into it.
struct KeyEntitySet {
  std::vector<std::string> entities;
  std::map<std::string, std::vector<TokenSpan>> occurrences;
  std::vector<std::string> dropped;  // external-list entries absent from the text

  bool empty() const { return entities.empty(); }
};

enum class ExtractorMode { heuristic, external_list };

struct HeuristicExtractorOptions {
  double keep_fraction = 0.30;  // top ceil(fraction * candidates), at least 1
  const WordSet* stopwords = nullptr;       // default list when null
  const WordSet* function_words = nullptr;  // default list when null
};

/// Content-token candidates, noun-likeness filter, ranked by
/// frequency x sentence dispersion.
KeyEntitySet extract_key_entities(const Section& section, const HeuristicExtractorOptions& options = {});

/// Supplied entities (matched as token subsequences); absent ones are
/// reported in `dropped`.
KeyEntitySet extract_key_entities(const Section& section, std::span<const std::string> supplied);

/// Noun-likeness heuristic used by the extractor.
bool looks_like_noun(std::string_view token, const WordSet& function_words);

/// Entity-list sidecar `{ "<section index>": [entity, ...] }`.
std::map<std::size_t, std::vector<std::string>> parse_entity_lists(std::string_view json_text);
std::map<std::size_t, std::vector<std::string>> load_entity_lists(const std::filesystem::path& path);

struct DroppedPair {
  std::size_t pair_index = 0;  // joins sentences pair_index and pair_index + 1
  double score = 0.0;

  bool operator==(const DroppedPair&) const = default;
};

struct LayerNetwork {
  std::size_t section_index = 0;
  std::vector<std::string> entities;  // node id -> entity
  graph::WeightedGraph graph;
  std::optional<stats::OutlierThreshold> threshold;  // absent for single-sentence sections
  std::vector<DroppedPair> dropped_pairs;
  std::size_t sentence_count = 0;
};

/// Co-occurrence layer: +1 per sentence holding both entities, +1 per
/// consecutive pair with score > lambda holding one in each sentence.
/// lambda is the lower fence of `scores` unless `lambda_override` is given.
/// Throws NoEntities or InvalidArgument (score count mismatch).
LayerNetwork build_layer(const Section& section, const KeyEntitySet& entities,
                         std::span<const CoherenceScore> scores,
                         std::optional<double> lambda_override = std::nullopt);

struct SectionMetrics {
  std::size_t section_index = 0;
  double slic = 0.0;
  bool slic_defined = true;  // false when the layer has no edges (slic reported as 0)
  std::size_t component_count = 0;
  double average_edge_weight = 0.0;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::size_t sentence_count = 0;
  bool below_filter = false;  // < 6 sentences or < 4 nodes
};

inline constexpr std::size_t kMinFilterSentences = 6;
inline constexpr std::size_t kMinFilterNodes = 4;

/// Coefficient of variation (population sd / mean) of the edge weights.
double slic(std::span<const double> edge_weights);

SectionMetrics section_metrics(const LayerNetwork& layer);

}  // namespace cohesia
