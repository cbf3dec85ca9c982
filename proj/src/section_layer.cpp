#include "cohesia/section_layer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "cohesia/error.hpp"

namespace cohesia {

namespace {

constexpr std::string_view kModule = "section_layer";

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool has_letter(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || u >= 0x80;
  });
}

std::string normalize_phrase(std::string_view phrase) {
  std::string out;
  for (const auto& t : tokenize(phrase)) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

}  // namespace

bool looks_like_noun(std::string_view token, const WordSet& function_words) {
  if (token.size() < 2 || !has_letter(token) || function_words.contains(token)) return false;
  // Adverb, adjective and verb endings.
  static constexpr std::string_view rejected[] = {"ly", "ous", "ful", "ible", "able", "ize", "ized", "izes"};
  for (auto suffix : rejected)
    if (token.size() > suffix.size() + 2 && ends_with(token, suffix)) return false;
  if (token.size() >= 6 && ends_with(token, "ed")) return false;
  return true;
}

KeyEntitySet extract_key_entities(const Section& section, const HeuristicExtractorOptions& options) {
  const WordSet& stop = options.stopwords ? *options.stopwords : default_stopwords();
  const WordSet& function_words = options.function_words ? *options.function_words : default_function_words();

  struct Candidate {
    std::size_t frequency = 0;
    std::set<std::size_t> sentences;
  };
  std::map<std::string, Candidate> candidates;
  for (const auto& sentence : section.sentences) {
    for (const auto& token : sentence.tokens) {
      if (stop.contains(token) || !looks_like_noun(token, function_words)) continue;
      auto& c = candidates[token];
      ++c.frequency;
      c.sentences.insert(sentence.index);
    }
  }

  KeyEntitySet result;
  if (candidates.empty() || section.sentences.empty()) return result;

  struct Ranked {
    std::string token;
    double score;
    std::size_t frequency;
  };
  std::vector<Ranked> ranked;
  const auto sentence_count = static_cast<double>(section.sentences.size());
  for (const auto& [token, c] : candidates) {
    const double dispersion = static_cast<double>(c.sentences.size()) / sentence_count;
    ranked.push_back({token, static_cast<double>(c.frequency) * dispersion, c.frequency});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.token < b.token;
  });

  auto keep = static_cast<std::size_t>(std::ceil(options.keep_fraction * static_cast<double>(ranked.size()) - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, ranked.size());
  for (std::size_t i = 0; i < keep; ++i) result.entities.push_back(ranked[i].token);
  std::sort(result.entities.begin(), result.entities.end());
  for (const auto& e : result.entities) result.occurrences[e] = find_occurrences(section, e);
  return result;
}

KeyEntitySet extract_key_entities(const Section& section, std::span<const std::string> supplied) {
  KeyEntitySet result;
  std::set<std::string> seen;
  for (const auto& raw : supplied) {
    auto entity = normalize_phrase(raw);
    if (entity.empty() || !seen.insert(entity).second) continue;
    auto spans = find_occurrences(section, entity);
    if (spans.empty()) {
      result.dropped.push_back(entity);
      continue;
    }
    result.entities.push_back(entity);
    result.occurrences[entity] = std::move(spans);
  }
  std::sort(result.entities.begin(), result.entities.end());
  return result;
}

std::map<std::size_t, std::vector<std::string>> parse_entity_lists(std::string_view json_text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(kModule, ErrorKind::ParseError, e.what());
  }
  if (!root.is_object()) throw Error(kModule, ErrorKind::ParseError, "entity list must be an object");
  std::map<std::size_t, std::vector<std::string>> lists;
  for (const auto& [key, value] : root.items()) {
    std::size_t index = 0;
    try {
      std::size_t used = 0;
      index = std::stoul(key, &used);
      if (used != key.size() || index == 0) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw Error(kModule, ErrorKind::ParseError, "entity list key '" + key + "' is not a 1-based section index");
    }
    if (!value.is_array()) throw Error(kModule, ErrorKind::ParseError, "entity list for section " + key + " must be an array");
    for (const auto& item : value) {
      if (!item.is_string()) throw Error(kModule, ErrorKind::ParseError, "entities must be strings");
      lists[index].push_back(item.get<std::string>());
    }
  }
  return lists;
}

std::map<std::size_t, std::vector<std::string>> load_entity_lists(const std::filesystem::path& path) {
  return parse_entity_lists(read_file(path));
}

LayerNetwork build_layer(const Section& section, const KeyEntitySet& entities, std::span<const CoherenceScore> scores,
                         std::optional<double> lambda_override) {
  if (entities.empty())
    throw Error(kModule, ErrorKind::NoEntities, "section " + std::to_string(section.index) + " has no key-entities");
  const std::size_t s = section.sentences.size();
  const std::size_t expected_pairs = s > 0 ? s - 1 : 0;
  if (scores.size() != expected_pairs)
    throw Error(kModule, ErrorKind::InvalidArgument,
                "section " + std::to_string(section.index) + " needs " + std::to_string(expected_pairs) +
                    " coherence scores, got " + std::to_string(scores.size()));

  LayerNetwork layer;
  layer.section_index = section.index;
  layer.entities = entities.entities;
  layer.sentence_count = s;

  // Entities present in each sentence (0-based sentence slot).
  std::vector<std::set<graph::NodeId>> present(s);
  for (graph::NodeId id = 0; id < layer.entities.size(); ++id) {
    auto it = entities.occurrences.find(layer.entities[id]);
    if (it == entities.occurrences.end()) continue;
    for (const auto& span : it->second)
      if (span.sentence >= 1 && span.sentence <= s) present[span.sentence - 1].insert(id);
  }

  std::optional<double> lambda = lambda_override;
  if (!scores.empty()) {
    std::vector<double> values;
    values.reserve(scores.size());
    for (const auto& sc : scores) values.push_back(sc.score);
    layer.threshold = stats::lower_fence(values);
    if (lambda_override) layer.threshold->lambda = *lambda_override;
    lambda = layer.threshold->lambda;
  }

  graph::GraphBuilder builder(layer.entities.size());
  for (const auto& ids : present) {
    for (auto a = ids.begin(); a != ids.end(); ++a)
      for (auto b = std::next(a); b != ids.end(); ++b) builder.add_weight(*a, *b, 1.0);
  }
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (!(scores[k].score > *lambda)) {
      layer.dropped_pairs.push_back({k + 1, scores[k].score});
      continue;
    }
    std::set<std::pair<graph::NodeId, graph::NodeId>> linked;
    for (auto x : present[k])
      for (auto y : present[k + 1])
        if (x != y) linked.insert(std::minmax(x, y));
    for (const auto& [x, y] : linked) builder.add_weight(x, y, 1.0);
  }
  layer.graph = builder.build();
  return layer;
}

double slic(std::span<const double> edge_weights) {
  if (edge_weights.empty()) return 0.0;
  const auto n = static_cast<double>(edge_weights.size());
  double mean = 0.0;
  for (double w : edge_weights) mean += w;
  mean /= n;
  double var = 0.0;
  for (double w : edge_weights) var += (w - mean) * (w - mean);
  var /= n;
  return std::sqrt(var) / mean;
}

SectionMetrics section_metrics(const LayerNetwork& layer) {
  SectionMetrics m;
  m.section_index = layer.section_index;
  m.node_count = layer.graph.node_count();
  m.edge_count = layer.graph.edge_count();
  m.sentence_count = layer.sentence_count;
  std::vector<double> weights;
  weights.reserve(m.edge_count);
  for (const auto& e : layer.graph.edges()) weights.push_back(e.weight);
  m.slic_defined = !weights.empty();
  m.slic = slic(weights);
  if (!weights.empty()) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    m.average_edge_weight = sum / static_cast<double>(weights.size());
  }
  m.component_count = graph::connected_components(layer.graph).size();
  m.below_filter = m.sentence_count < kMinFilterSentences || m.node_count < kMinFilterNodes;
  return m;
}

}  // namespace cohesia
