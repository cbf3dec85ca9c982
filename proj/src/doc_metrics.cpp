#include "cohesia/doc_metrics.hpp"

#include <cmath>

#include "cohesia/error.hpp"

namespace cohesia {

namespace {

constexpr std::string_view kModule = "doc_metrics";

void require_layers(std::size_t n) {
  if (n == 0) throw Error(kModule, ErrorKind::NoLayers, "document has no layers");
}

}  // namespace

std::optional<double> LayerTerms::deviation() const {
  if (!apl) return std::nullopt;
  return std::log(static_cast<double>(node_count)) - *apl;
}

LayerTerms layer_terms(const LayerNetwork& layer) {
  LayerTerms t;
  t.section_index = layer.section_index;
  t.node_count = layer.graph.node_count();
  t.wcc = graph::weighted_clustering(layer.graph);
  if (t.node_count >= 2) t.apl = graph::average_path_length(layer.graph);
  return t;
}

std::vector<LayerTerms> layer_terms(std::span<const LayerNetwork> layers) {
  std::vector<LayerTerms> out(layers.size());
  const auto n = static_cast<std::int64_t>(layers.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = layer_terms(layers[static_cast<std::size_t>(i)]);
  return out;
}

double compute_eci(std::span<const LayerTerms> layers) {
  require_layers(layers.size());
  double sum = 0.0;
  for (const auto& t : layers) sum += (1.0 - t.wcc) * (1.0 - t.wcc);
  return std::sqrt(sum / static_cast<double>(layers.size()));
}

double compute_eci(std::span<const LayerNetwork> layers) {
  auto terms = layer_terms(layers);
  return compute_eci(terms);
}

EpiResult compute_epi(std::span<const LayerTerms> layers) {
  require_layers(layers.size());
  EpiResult result;
  double sum = 0.0;
  for (const auto& t : layers) {
    auto dev = t.deviation();
    if (!dev) {
      result.excluded_sections.push_back(t.section_index);
      continue;
    }
    sum += *dev * *dev;
    ++result.layers_used;
  }
  if (result.layers_used > 0) result.value = std::sqrt(sum / static_cast<double>(result.layers_used));
  return result;
}

EpiResult compute_epi(std::span<const LayerNetwork> layers) {
  auto terms = layer_terms(layers);
  return compute_epi(terms);
}

CciResult compute_cci(const Metagraph& before, const Metagraph& after) {
  CciResult r;
  r.k4_before = graph::count_k4(flatten(before));
  r.k4_after = graph::count_k4(flatten(after));
  if (r.k4_before == 0) {
    r.no_k4_baseline = true;
    return r;
  }
  r.value = 1.0 - static_cast<double>(r.k4_after) / static_cast<double>(r.k4_before);
  return r;
}

IciResult compute_ici(const Metagraph& after) {
  IciResult r;
  std::vector<std::vector<bool>> linked(after.layers.size());
  for (std::size_t i = 0; i < after.layers.size(); ++i) linked[i].assign(after.layers[i].concepts.size(), false);
  for (const auto& e : after.intralayer) {
    linked[e.layer][e.r] = true;
    linked[e.layer][e.s] = true;
  }
  for (std::size_t i = 0; i < after.layers.size(); ++i) {
    MetaLayerIsolation iso;
    iso.section_index = after.layers[i].section_index;
    iso.metanode_count = after.layers[i].concepts.size();
    iso.single_concept_layer = iso.metanode_count == 1;
    for (std::uint32_t c = 0; c < iso.metanode_count; ++c)
      if (!linked[i][c]) iso.isolated.push_back(c);
    r.isolated_total += iso.isolated.size();
    r.metanode_total += iso.metanode_count;
    r.per_layer.push_back(std::move(iso));
  }
  if (r.metanode_total == 0) throw Error(kModule, ErrorKind::NoMetanodes, "metagraph has no metanodes");
  r.value = static_cast<double>(r.isolated_total) / static_cast<double>(r.metanode_total);
  return r;
}

DocumentMetrics compute_document_metrics(std::span<const LayerTerms> terms, const Metagraph& before,
                                         const Metagraph& after) {
  if (terms.size() != after.layers.size())
    throw Error(kModule, ErrorKind::InvalidArgument, std::to_string(terms.size()) + " layer terms for " +
                                                         std::to_string(after.layers.size()) + " metagraph layers");
  DocumentMetrics m;
  m.eci = compute_eci(terms);
  auto epi = compute_epi(terms);
  m.epi = epi.value;
  for (auto s : epi.excluded_sections) m.annotations.push_back("layer-too-small:section-" + std::to_string(s));
  auto cci = compute_cci(before, after);
  m.cci = cci.value;
  m.k4_before = cci.k4_before;
  m.k4_after = cci.k4_after;
  if (cci.no_k4_baseline) m.annotations.push_back("no-k4-baseline");
  auto ici = compute_ici(after);
  m.ici = ici.value;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const auto& iso = ici.per_layer[i];
    if (iso.single_concept_layer) m.annotations.push_back("single-concept-layer:section-" + std::to_string(iso.section_index));
    m.per_layer.push_back({t.section_index, t.wcc, t.apl, t.node_count, t.deviation(), iso.isolated.size(),
                           iso.metanode_count});
  }
  return m;
}

}  // namespace cohesia
