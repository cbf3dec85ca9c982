#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohesia/doc_metrics.hpp"
#include "cohesia/mln.hpp"
#include "cohesia/section_layer.hpp"

namespace cohesia {

enum class FindingKind {
  low_slic,
  multi_component,
  dropped_pair,
  high_layer_deviation,
  isolated_concept,
  pruned_interlayer_link,
  pruned_intralayer_link,
};

std::string_view to_string(FindingKind kind);
FindingKind finding_kind_from_string(std::string_view name);

struct FindingLocation {
  std::size_t section = 0;
  std::optional<std::size_t> pair_index;       // dropped_pair
  std::optional<std::size_t> layer;            // 1-based metagraph layer
  std::optional<std::uint32_t> community;
  std::optional<std::size_t> other_layer;      // pruned_* links
  std::optional<std::size_t> other_section;
  std::optional<std::uint32_t> other_community;

  bool operator==(const FindingLocation&) const = default;
};

struct Finding {
  FindingKind kind = FindingKind::low_slic;
  FindingLocation location;
  double severity = 1.0;
  std::string message;

  bool operator==(const Finding&) const = default;
};

/// Per-section row of the report.
struct SectionSummary {
  std::size_t index = 0;
  bool skipped = false;  // no layer was built (empty section or no key-entities)
  double slic = 0.0;
  bool slic_defined = false;
  std::size_t components = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t sentences = 0;
  bool below_filter = false;
  std::optional<double> lambda;
  std::vector<DroppedPair> dropped_pairs;

  bool operator==(const SectionSummary&) const = default;
};

SectionSummary summarize(const SectionMetrics& metrics, const LayerNetwork& layer);

struct Provenance {
  std::string provider;
  std::string quartile_method;
  std::string log_base = "e";
  std::string low_slic_rule;
  std::string threshold_scope = "section";
  std::string extractor = "heuristic";
  std::uint64_t seed = 42;
  double interlayer_cutoff = 0.5;
  std::optional<double> intralayer_fence;
  std::optional<double> interlayer_fence;

  bool operator==(const Provenance&) const = default;
};

struct CohesionReport {
  std::string doc_id;
  Provenance provenance;
  std::vector<SectionSummary> sections;
  DocumentMetrics document;
  std::vector<Finding> findings;
  std::vector<std::string> warnings;

  bool operator==(const CohesionReport&) const = default;
};

inline constexpr std::string_view kLowSlicRule =
    "slic below the document's first quartile (type 7) of section SLIC values, or slic == 0";

/// CHIAA findings, grouped by kind (enum order) and sorted by severity
/// descending within a kind. `meta` is the pruned metagraph.
std::vector<Finding> generate_findings(std::span<const SectionSummary> sections, const DocumentMetrics& doc,
                                       const Metagraph& meta);

enum class ReportFormat { json, markdown };

nlohmann::ordered_json report_to_json(const CohesionReport& report);
CohesionReport report_from_json(const nlohmann::json& j);

std::string render_report(const CohesionReport& report, ReportFormat format);

}  // namespace cohesia
