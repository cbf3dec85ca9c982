#include "cohesia/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "cohesia/doc_metrics.hpp"
#include "cohesia/error.hpp"
#include "cohesia/eval_harness.hpp"
#include "cohesia/section_layer.hpp"
#include "cohesia/stats.hpp"

namespace cohesia {

namespace {

constexpr std::string_view kModule = "pipeline";

// Work product of one section before layers are built.
struct SectionWork {
  bool skipped = false;
  KeyEntitySet entities;
  std::vector<CoherenceScore> scores;
  LayerEmbeddings embeddings;
  std::vector<std::string> warnings;
};

SectionWork prepare_section(const Section& section, const SemanticProvider& provider, const Config& config,
                            const EntityLists* lists) {
  SectionWork w;
  const std::string where = "section " + std::to_string(section.index);
  if (section.empty || section.sentences.empty()) {
    w.skipped = true;
    w.warnings.push_back(where + ": empty after cleaning, skipped");
    return w;
  }
  if (config.extractor == ExtractorMode::external_list) {
    static const std::vector<std::string> none;
    const std::vector<std::string>* supplied = &none;
    if (lists) {
      auto it = lists->find(section.index);
      if (it != lists->end()) supplied = &it->second;
    }
    w.entities = extract_key_entities(section, *supplied);
    for (const auto& d : w.entities.dropped) w.warnings.push_back(where + ": entity '" + d + "' not found in text");
  } else {
    w.entities = extract_key_entities(section);
  }
  if (w.entities.empty()) {
    w.skipped = true;
    w.warnings.push_back(where + ": no key-entities, skipped");
    return w;
  }
  if (section.sentences.size() >= 2) w.scores = provider.score_pairs(section);
  auto vectors = provider.embed_entities(section, w.entities.entities);
  for (auto& e : vectors) w.embeddings.emplace(e.entity, std::move(e.vector));
  return w;
}

std::string extractor_name(ExtractorMode mode) {
  return mode == ExtractorMode::external_list ? "external-list" : "heuristic";
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

std::string_view to_string(ThresholdScope scope) {
  return scope == ThresholdScope::document ? "document" : "section";
}

std::unique_ptr<SemanticProvider> make_provider(const Config& config) {
  if (config.provider == ProviderKind::remote) {
    if (config.endpoint.empty())
      throw Error(kModule, ErrorKind::ProviderUnavailable, "remote provider needs an endpoint (--endpoint or COHESIA_ENDPOINT)");
    return std::make_unique<RemoteProvider>(config.endpoint, config.timeout_seconds);
  }
  return std::make_unique<SurrogateProvider>();
}

InputFormat guess_input_format(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".json" ? InputFormat::json : InputFormat::plain;
}

Analysis analyze_document(const Document& doc, const SemanticProvider& provider, const Config& config,
                          const EntityLists* entity_lists) {
  const auto n = static_cast<std::int64_t>(doc.sections.size());
  std::vector<SectionWork> work(doc.sections.size());
  std::vector<std::exception_ptr> failures(doc.sections.size());

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      work[k] = prepare_section(doc.sections[k], provider, config, entity_lists);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  std::optional<double> document_lambda;
  if (config.threshold_scope == ThresholdScope::document) {
    std::vector<double> all;
    for (const auto& w : work)
      if (!w.skipped)
        for (const auto& s : w.scores) all.push_back(s.score);
    if (!all.empty()) document_lambda = stats::lower_fence(all).lambda;
  }

  Analysis result;
  auto& report = result.report;
  report.doc_id = doc.id;

  std::vector<LayerNetwork> layers;
  std::vector<LayerEmbeddings> embeddings;
  std::vector<std::optional<std::size_t>> layer_of(doc.sections.size());
  for (std::size_t k = 0; k < doc.sections.size(); ++k) {
    auto& w = work[k];
    for (auto& msg : w.warnings) report.warnings.push_back(std::move(msg));
    if (w.skipped) continue;
    layer_of[k] = layers.size();
    layers.push_back(build_layer(doc.sections[k], w.entities, w.scores, document_lambda));
    embeddings.push_back(std::move(w.embeddings));
  }
  if (layers.empty())
    throw Error(kModule, ErrorKind::NoLayers, "document '" + doc.id + "' has no section with key-entities");

  for (std::size_t k = 0; k < doc.sections.size(); ++k) {
    if (layer_of[k]) {
      const auto& layer = layers[*layer_of[k]];
      report.sections.push_back(summarize(section_metrics(layer), layer));
    } else {
      SectionSummary s;
      s.index = doc.sections[k].index;
      s.skipped = true;
      s.sentences = doc.sections[k].sentences.size();
      s.below_filter = true;
      report.sections.push_back(std::move(s));
    }
  }

  const auto terms = layer_terms(layers);
  const auto mln = build_interlayer(std::move(layers), embeddings);
  const auto condensed = condense(mln, config.seed);
  auto [pruned, fences] = prune(condensed);
  report.document = compute_document_metrics(terms, condensed, pruned);
  report.findings = generate_findings(report.sections, report.document, pruned);

  auto& p = report.provenance;
  p.provider = provider.name();
  p.quartile_method = std::string(stats::kQuartileMethod);
  p.low_slic_rule = std::string(kLowSlicRule);
  p.threshold_scope = std::string(to_string(config.threshold_scope));
  p.extractor = extractor_name(config.extractor);
  p.seed = config.seed;
  p.interlayer_cutoff = kInterlayerCutoff;
  p.intralayer_fence = fences.intralayer_lambda;
  p.interlayer_fence = fences.interlayer_lambda;

  result.metagraph = std::move(pruned);
  return result;
}

int cmd_analyze(const std::filesystem::path& doc_path, const Config& config, std::ostream& out, std::ostream& err) {
  try {
    const auto format = config.input_format.value_or(guess_input_format(doc_path));
    const auto doc = load_document(doc_path, format, config.load);
    std::optional<EntityLists> lists;
    if (config.extractor == ExtractorMode::external_list) {
      if (!config.entities_file)
        throw Error(kModule, ErrorKind::InvalidArgument, "external entity mode needs an entities file");
      lists = load_entity_lists(*config.entities_file);
    }
    const auto provider = make_provider(config);
    const auto analysis = analyze_document(doc, *provider, config, lists ? &*lists : nullptr);
    out << render_report(analysis.report, config.format);
    for (const auto& w : analysis.report.warnings) err << "warning: " << w << "\n";
    return analysis.report.warnings.empty() ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_eval(const EvalOptions& options, const Config& config, std::ostream& out, std::ostream& err) {
  std::vector<eval::ManifestEntry> entries;
  std::unique_ptr<SemanticProvider> provider;
  try {
    if (config.extractor == ExtractorMode::external_list)
      throw Error(kModule, ErrorKind::InvalidArgument, "eval supports the heuristic extractor only");
    entries = eval::load_manifest(options.manifest);
    provider = make_provider(config);
    std::filesystem::create_directories(options.out_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  const auto n = static_cast<std::int64_t>(entries.size());
  std::vector<std::optional<eval::CorpusRecord>> slots(entries.size());
  std::vector<std::string> failures(entries.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto& entry = entries[k];
    try {
      const auto format = config.input_format.value_or(guess_input_format(entry.path));
      const auto doc = load_document(entry.path, format, config.load);
      slots[k] = eval::make_record(analyze_document(doc, *provider, config).report, entry.category);
    } catch (const std::exception& e) {
      failures[k] = entry.path.string() + ": " + e.what();
    }
  }

  std::vector<std::string> warnings;
  std::vector<eval::CorpusRecord> records;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (slots[k])
      records.push_back(std::move(*slots[k]));
    else
      warnings.push_back("document skipped: " + failures[k]);
  }
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });

  nlohmann::ordered_json summary;
  summary["seed"] = config.seed;
  summary["filters"] = config.apply_filters;
  summary["provider"] = provider->name();
  summary["documents"] = records.size();
  out << "seed: " << config.seed << "\n";
  out << "documents analyzed: " << records.size() << " of " << entries.size() << "\n";

  if (records.empty()) {
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    err << "error: no document could be analyzed\n";
    return 1;
  }

  summary["contingency"] = nlohmann::ordered_json::array();
  try {
    const bool f = config.apply_filters;
    const std::vector<eval::Contingency> tables = {
        eval::component_contingency(records, f),
        eval::component_contingency_sampled_documents(records, options.documents_per_category, config.seed, f),
        eval::component_contingency_balanced_sections(records, config.seed, f),
    };
    for (const auto& c : tables) {
      out << "\n[" << c.variant << "]\n";
      out << "            " << c.categories[0] << "\t" << c.categories[1] << "\n";
      out << "multiple    " << c.table[0][0] << "\t" << c.table[0][1] << "\n";
      out << "single      " << c.table[1][0] << "\t" << c.table[1][1] << "\n";
      out << "chi2 = " << fixed(c.chi_square.statistic, 6) << ", dof = " << c.chi_square.dof
          << ", p = " << c.chi_square.p_value << "\n";
      for (const auto& r : c.rates)
        out << "P(multiple components | " << r.category << ") = " << r.multiple << "/" << r.total << " = "
            << fixed(r.probability, 8) << "\n";
      nlohmann::ordered_json j;
      j["variant"] = c.variant;
      j["categories"] = c.categories;
      j["table"] = {{"multiple", c.table[0]}, {"single", c.table[1]}};
      j["statistic"] = c.chi_square.statistic;
      j["p_value"] = c.chi_square.p_value;
      j["dof"] = c.chi_square.dof;
      for (const auto& r : c.rates)
        j["rates"][r.category] = {{"multiple", r.multiple}, {"total", r.total}, {"probability", r.probability}};
      summary["contingency"].push_back(std::move(j));
    }
  } catch (const Error& e) {
    warnings.push_back(std::string("contingency not computed: ") + e.what());
  }

  if (options.external_csv) {
    summary["correlations"] = nlohmann::ordered_json::array();
    try {
      const auto table = eval::load_external_csv(*options.external_csv);
      const auto corr = eval::correlate_external(records, table, config.apply_filters);
      out << "\ncorrelation of SLIC with external indices\n";
      for (const auto& c : corr) {
        out << c.index_name << "\tr = " << fixed(c.pearson_r, 6) << "\tn = " << c.n << "\n";
        summary["correlations"].push_back({{"index", c.index_name}, {"pearson_r", c.pearson_r}, {"n", c.n}});
      }
    } catch (const Error& e) {
      warnings.push_back(std::string("correlations not computed: ") + e.what());
    }
  }

  nlohmann::ordered_json slic_summary = nlohmann::ordered_json::object();
  try {
    for (const auto& [cat, s] : eval::slic_summary_by_category(records, config.apply_filters))
      slic_summary[cat] = {{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
  } catch (const Error& e) {
    warnings.push_back(std::string("SLIC summary not computed: ") + e.what());
  }
  summary["slic_summary"] = std::move(slic_summary);
  summary["warnings"] = warnings;

  try {
    eval::export_metrics_csv(records, options.out_dir / "metrics.csv");
    std::ofstream sections(options.out_dir / "sections.csv", std::ios::binary);
    sections << eval::section_slic_csv(records, config.apply_filters);
    std::ofstream js(options.out_dir / "summary.json", std::ios::binary);
    js << summary.dump(2) << "\n";
    if (!sections || !js) throw Error(kModule, ErrorKind::InvalidArgument, "cannot write into " + options.out_dir.string());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  out << "\nwrote " << (options.out_dir / "metrics.csv").string() << ", sections.csv, summary.json\n";

  for (const auto& w : warnings) err << "warning: " << w << "\n";
  return warnings.empty() ? 0 : 2;
}

}  // namespace cohesia
