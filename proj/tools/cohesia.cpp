// cohesia: discourse-cohesion analysis of sectioned documents.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cohesia/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string provider = "surrogate";
  std::string endpoint;
  std::string threshold_scope = "section";
  std::string entities;
  std::string format = "json";
  std::string input_format = "auto";
  std::uint64_t seed = 42;
  bool no_filters = false;
  bool clean = false;
  std::string delimiter = "===";
  int timeout = 30;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--provider", f.provider, "semantic provider")
      ->check(CLI::IsMember({"surrogate", "remote"}))
      ->capture_default_str();
  cmd->add_option("--endpoint", f.endpoint, "sidecar URL for the remote provider (default: $COHESIA_ENDPOINT)");
  cmd->add_option("--timeout", f.timeout, "remote request timeout in seconds")->capture_default_str();
  cmd->add_option("--seed", f.seed, "seed for community detection and sampling")->capture_default_str();
  cmd->add_option("--threshold-scope", f.threshold_scope, "where the coherence outlier fence is computed")
      ->check(CLI::IsMember({"section", "document"}))
      ->capture_default_str();
  cmd->add_flag("--no-filters", f.no_filters, "keep sections with < 6 sentences or < 4 nodes in corpus statistics");
  cmd->add_option("--input-format", f.input_format, "document format")
      ->check(CLI::IsMember({"auto", "json", "plain"}))
      ->capture_default_str();
  cmd->add_option("--delimiter", f.delimiter, "section separator line for plain input")->capture_default_str();
  cmd->add_flag("--clean", f.clean, "strip heading, caption and equation lines before segmenting");
}

cohesia::Config to_config(const CommonFlags& f) {
  cohesia::Config c;
  c.provider = f.provider == "remote" ? cohesia::ProviderKind::remote : cohesia::ProviderKind::surrogate;
  c.endpoint = f.endpoint;
  if (c.endpoint.empty())
    if (const char* env = std::getenv("COHESIA_ENDPOINT")) c.endpoint = env;
  c.timeout_seconds = f.timeout;
  c.threshold_scope = f.threshold_scope == "document" ? cohesia::ThresholdScope::document : cohesia::ThresholdScope::section;
  if (!f.entities.empty()) {
    c.extractor = cohesia::ExtractorMode::external_list;
    c.entities_file = f.entities;
  }
  c.seed = f.seed;
  c.apply_filters = !f.no_filters;
  c.format = f.format == "md" ? cohesia::ReportFormat::markdown : cohesia::ReportFormat::json;
  if (f.input_format == "json") c.input_format = cohesia::InputFormat::json;
  if (f.input_format == "plain") c.input_format = cohesia::InputFormat::plain;
  c.load.clean = f.clean;
  c.load.delimiter = f.delimiter;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discourse-cohesion analysis of sectioned documents"};
  app.require_subcommand(1);

  CommonFlags analyze_flags;
  std::string doc_path;
  std::string out_path;
  auto* analyze = app.add_subcommand("analyze", "analyze one document and print a report");
  analyze->add_option("document", doc_path, "document (.json or plain text)")->required();
  add_common(analyze, analyze_flags);
  analyze->add_option("--entities", analyze_flags.entities, "JSON file of key-entities per section index");
  analyze->add_option("--format", analyze_flags.format, "report format")
      ->check(CLI::IsMember({"json", "md"}))
      ->capture_default_str();
  analyze->add_option("-o,--output", out_path, "write the report here instead of stdout");

  CommonFlags eval_flags;
  cohesia::EvalOptions eval_options;
  std::string manifest;
  std::string external;
  std::string out_dir = ".";
  auto* eval = app.add_subcommand("eval", "evaluate a categorized corpus");
  eval->add_option("manifest", manifest, "JSON list of {path, category}")->required();
  add_common(eval, eval_flags);
  eval->add_option("--external", external, "CSV of external indices keyed by doc_id,section_index");
  eval->add_option("--out-dir", out_dir, "directory for metrics.csv, sections.csv and summary.json")
      ->capture_default_str();
  eval->add_option("--docs-per-category", eval_options.documents_per_category,
                   "documents drawn per category for the sampled table")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (*analyze) {
    const auto config = to_config(analyze_flags);
    if (out_path.empty()) return cohesia::cmd_analyze(doc_path, config, std::cout, std::cerr);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return 1;
    }
    return cohesia::cmd_analyze(doc_path, config, out, std::cerr);
  }

  eval_options.manifest = manifest;
  if (!external.empty()) eval_options.external_csv = external;
  eval_options.out_dir = out_dir;
  return cohesia::cmd_eval(eval_options, to_config(eval_flags), std::cout, std::cerr);
}
