#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cohesia/mln.hpp"
#include "cohesia/section_layer.hpp"

namespace cohesia {

/// Graph-level quantities of one layer that feed ECI and EPI.
struct LayerTerms {
  std::size_t section_index = 0;
  std::size_t node_count = 0;
  double wcc = 0.0;
  std::optional<double> apl;  // absent when node_count < 2

  /// ln(n) - APL; absent when APL is.
  std::optional<double> deviation() const;
};

LayerTerms layer_terms(const LayerNetwork& layer);

/// Per-layer terms for all layers, computed in parallel, returned in layer order.
std::vector<LayerTerms> layer_terms(std::span<const LayerNetwork> layers);

/// sqrt(sum_i (1 - WCC_i)^2 / N). Throws NoLayers.
double compute_eci(std::span<const LayerTerms> layers);
double compute_eci(std::span<const LayerNetwork> layers);

struct EpiResult {
  double value = 0.0;
  std::size_t layers_used = 0;
  std::vector<std::size_t> excluded_sections;  // layers with fewer than two nodes
};

/// sqrt(sum_i (ln n_i - APL_i)^2 / N) over layers with n_i >= 2; smaller
/// layers are excluded and N shrinks accordingly. Throws NoLayers.
EpiResult compute_epi(std::span<const LayerTerms> layers);
EpiResult compute_epi(std::span<const LayerNetwork> layers);

struct CciResult {
  double value = 0.0;
  std::uint64_t k4_before = 0;
  std::uint64_t k4_after = 0;
  bool no_k4_baseline = false;  // k4_before == 0, value reported as 0
};

CciResult compute_cci(const Metagraph& before, const Metagraph& after);

struct MetaLayerIsolation {
  std::size_t section_index = 0;
  std::size_t metanode_count = 0;
  std::vector<std::uint32_t> isolated;  // concept ids without a surviving intralayer metaedge
  bool single_concept_layer = false;
};

struct IciResult {
  double value = 0.0;
  std::vector<MetaLayerIsolation> per_layer;
  std::size_t isolated_total = 0;
  std::size_t metanode_total = 0;
};

/// Fraction of metanodes with no intralayer metaedge. Throws NoMetanodes.
IciResult compute_ici(const Metagraph& after);

struct PerLayerMetrics {
  std::size_t section_index = 0;
  double wcc = 0.0;
  std::optional<double> apl;
  std::size_t node_count = 0;
  std::optional<double> deviation;
  std::size_t isolated_metanodes = 0;
  std::size_t metanodes = 0;

  bool operator==(const PerLayerMetrics&) const = default;
};

struct DocumentMetrics {
  double eci = 0.0;
  double epi = 0.0;
  double cci = 0.0;
  double ici = 0.0;
  std::uint64_t k4_before = 0;
  std::uint64_t k4_after = 0;
  std::vector<PerLayerMetrics> per_layer;
  std::vector<std::string> annotations;

  bool operator==(const DocumentMetrics&) const = default;
};

/// Assembles all four indices. `terms`, `before` and `after` must describe
/// the same layers in the same order.
DocumentMetrics compute_document_metrics(std::span<const LayerTerms> terms, const Metagraph& before,
                                         const Metagraph& after);

}  // namespace cohesia
