#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cohesia/report.hpp"
#include "cohesia/stats.hpp"

namespace cohesia::eval {

struct CorpusRecord {
  std::string doc_id;
  std::string category;
  std::vector<SectionSummary> sections;
  DocumentMetrics document;
};

CorpusRecord make_record(const CohesionReport& report, std::string category);

/// Sections that enter corpus statistics: analyzed and, when filters are on,
/// at least six sentences and four entity nodes.
bool passes_filter(const SectionSummary& s, bool apply_filters);

struct ManifestEntry {
  std::filesystem::path path;  // resolved against the manifest's directory
  std::string category;
};

/// JSON list of {path, category}. Throws ParseError.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest);

struct CategoryRate {
  std::string category;
  std::size_t multiple = 0;
  std::size_t total = 0;
  double probability = 0.0;  // multiple / total
};

struct Contingency {
  std::string variant;
  std::array<std::string, 2> categories;  // column labels, sorted
  stats::Table2x2 table{};                // rows: multiple, single components
  stats::ChiSquareResult chi_square;
  std::array<CategoryRate, 2> rates;
};

/// Empirical multi-component probability per column of a contingency table.
std::array<CategoryRate, 2> category_rates(const stats::Table2x2& table, const std::array<std::string, 2>& categories);

/// Component-count contingency over all filtered sections. Requires exactly
/// two categories; throws DegenerateTable otherwise or on a zero margin.
Contingency component_contingency(const std::vector<CorpusRecord>& records, bool apply_filters = true);

/// Same table after drawing, per category, `documents_per_category` documents
/// at random (all documents when fewer are available).
Contingency component_contingency_sampled_documents(const std::vector<CorpusRecord>& records,
                                                    std::size_t documents_per_category, std::uint64_t seed,
                                                    bool apply_filters = true);

/// Same table after down-sampling the larger category's sections to the size
/// of the smaller one.
Contingency component_contingency_balanced_sections(const std::vector<CorpusRecord>& records, std::uint64_t seed,
                                                    bool apply_filters = true);

struct Correlation {
  std::string index_name;
  double pearson_r = 0.0;
  std::size_t n = 0;
};

struct ExternalIndexTable {
  std::vector<std::string> columns;                                        // index names
  std::map<std::pair<std::string, std::size_t>, std::vector<double>> rows; // (doc, section) -> values
};

/// CSV with header `doc_id,section_index,<index...>`. Throws ParseError.
ExternalIndexTable parse_external_csv(std::string_view text);
ExternalIndexTable load_external_csv(const std::filesystem::path& path);

/// Pearson r of SLIC against each external column over the joined, filtered
/// sections. Throws JoinEmpty or ZeroVariance.
std::vector<Correlation> correlate_external(const std::vector<CorpusRecord>& records,
                                            const ExternalIndexTable& external, bool apply_filters = true);

/// Min-max normalized EPI per record, in record order (all 0 when EPI is constant).
std::vector<double> epi_minmax(const std::vector<CorpusRecord>& records);

/// id,category,eci,epi,epi_minmax,cci,ici; one row per document sorted by id.
std::string metrics_csv(const std::vector<CorpusRecord>& records);
void export_metrics_csv(const std::vector<CorpusRecord>& records, const std::filesystem::path& path);

/// doc_id,category,section_index,slic,components,sentences,nodes; filtered sections only.
std::string section_slic_csv(const std::vector<CorpusRecord>& records, bool apply_filters = true);

/// Five-number summary of SLIC per category over filtered sections.
std::map<std::string, stats::FiveNumberSummary> slic_summary_by_category(const std::vector<CorpusRecord>& records,
                                                                         bool apply_filters = true);

}  // namespace cohesia::eval
