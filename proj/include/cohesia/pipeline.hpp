#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cohesia/corpus_io.hpp"
#include "cohesia/mln.hpp"
#include "cohesia/report.hpp"
#include "cohesia/semantics.hpp"

namespace cohesia {

enum class ProviderKind { surrogate, remote };
enum class ThresholdScope { section, document };

std::string_view to_string(ThresholdScope scope);

struct Config {
  ProviderKind provider = ProviderKind::surrogate;
  std::string endpoint;  // remote only
  int timeout_seconds = 30;
  ThresholdScope threshold_scope = ThresholdScope::section;
  ExtractorMode extractor = ExtractorMode::heuristic;
  std::optional<std::filesystem::path> entities_file;  // external_list mode
  std::uint64_t seed = 42;
  bool apply_filters = true;
  ReportFormat format = ReportFormat::json;
  std::optional<InputFormat> input_format;  // guessed from the extension when absent
  LoadOptions load;
};

/// Surrogate, or a remote client whose health check has already passed.
std::unique_ptr<SemanticProvider> make_provider(const Config& config);

using EntityLists = std::map<std::size_t, std::vector<std::string>>;

struct Analysis {
  CohesionReport report;
  Metagraph metagraph;  // after pruning
};

/// Runs every stage on a loaded document. Sections are processed in
/// parallel; the result does not depend on the thread count. Sections that
/// are empty or yield no key-entities are skipped and listed in warnings.
/// Throws NoLayers when nothing is left to analyze.
Analysis analyze_document(const Document& doc, const SemanticProvider& provider, const Config& config,
                          const EntityLists* entity_lists = nullptr);

InputFormat guess_input_format(const std::filesystem::path& path);

/// Loads, analyzes and renders one document. Returns 0, 2 when the report
/// carries warnings, 1 on errors (reported on `err`).
int cmd_analyze(const std::filesystem::path& doc_path, const Config& config, std::ostream& out, std::ostream& err);

struct EvalOptions {
  std::filesystem::path manifest;
  std::optional<std::filesystem::path> external_csv;
  std::filesystem::path out_dir = ".";
  std::size_t documents_per_category = 100;
};

/// Corpus evaluation: prints contingency tables, rates and correlations on
/// `out`, writes metrics.csv, sections.csv and summary.json into out_dir.
/// Same exit-code contract as cmd_analyze.
int cmd_eval(const EvalOptions& options, const Config& config, std::ostream& out, std::ostream& err);

}  // namespace cohesia
