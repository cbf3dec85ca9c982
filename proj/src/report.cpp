#include "cohesia/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "cohesia/error.hpp"
#include "cohesia/stats.hpp"

namespace cohesia {

namespace {

constexpr std::string_view kModule = "chiaa_report";

constexpr std::pair<FindingKind, std::string_view> kKindNames[] = {
    {FindingKind::low_slic, "low_slic"},
    {FindingKind::multi_component, "multi_component"},
    {FindingKind::dropped_pair, "dropped_pair"},
    {FindingKind::high_layer_deviation, "high_layer_deviation"},
    {FindingKind::isolated_concept, "isolated_concept"},
    {FindingKind::pruned_interlayer_link, "pruned_interlayer_link"},
    {FindingKind::pruned_intralayer_link, "pruned_intralayer_link"},
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

FindingLocation at(std::size_t section) {
  FindingLocation loc;
  loc.section = section;
  return loc;
}

std::string concept_label(std::size_t layer, std::uint32_t community) {
  return std::to_string(layer) + "." + std::to_string(community);
}

template <typename T>
void put_optional(nlohmann::ordered_json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

template <typename T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

std::string_view to_string(FindingKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

FindingKind finding_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw Error(kModule, ErrorKind::ParseError, "unknown finding kind '" + std::string(name) + "'");
}

SectionSummary summarize(const SectionMetrics& metrics, const LayerNetwork& layer) {
  SectionSummary s;
  s.index = metrics.section_index;
  s.slic = metrics.slic;
  s.slic_defined = metrics.slic_defined;
  s.components = metrics.component_count;
  s.nodes = metrics.node_count;
  s.edges = metrics.edge_count;
  s.sentences = metrics.sentence_count;
  s.below_filter = metrics.below_filter;
  if (layer.threshold) s.lambda = layer.threshold->lambda;
  s.dropped_pairs = layer.dropped_pairs;
  return s;
}

std::vector<Finding> generate_findings(std::span<const SectionSummary> sections, const DocumentMetrics& doc,
                                       const Metagraph& meta) {
  std::vector<Finding> findings;

  std::vector<const SectionSummary*> analyzed;
  for (const auto& s : sections)
    if (!s.skipped) analyzed.push_back(&s);

  if (!analyzed.empty()) {
    std::vector<double> values;
    for (const auto* s : analyzed) values.push_back(s->slic);
    const auto summary = stats::five_number_summary(values);
    for (const auto* s : analyzed) {
      if (s->slic < summary.q1 || s->slic == 0.0) {
        findings.push_back({FindingKind::low_slic,
                            at(s->index),
                            summary.median - s->slic,
                            "Section " + std::to_string(s->index) + " has comparatively low SLIC " + fmt(s->slic) +
                                " (document median " + fmt(summary.median) + ")."});
      }
    }
  }

  for (const auto* s : analyzed) {
    if (s->components <= 1) continue;
    findings.push_back({FindingKind::multi_component,
                        at(s->index),
                        1.0,
                        "Section " + std::to_string(s->index) + " splits into " + std::to_string(s->components) +
                            " disconnected groups of key-entities; review its low-coherence sentence pairs."});
    for (const auto& dp : s->dropped_pairs) {
      auto loc = at(s->index);
      loc.pair_index = dp.pair_index;
      findings.push_back({FindingKind::dropped_pair, loc, 1.0,
                          "Section " + std::to_string(s->index) + ": sentences " + std::to_string(dp.pair_index) +
                              " and " + std::to_string(dp.pair_index + 1) + " read as a break in sequence (score " +
                              fmt(dp.score) + (s->lambda ? " <= threshold " + fmt(*s->lambda) : std::string()) +
                              ")."});
    }
  }

  for (const auto& layer : doc.per_layer) {
    if (!layer.deviation || *layer.deviation >= 0.0) continue;
    findings.push_back({FindingKind::high_layer_deviation,
                        at(layer.section_index),
                        -*layer.deviation,
                        "Section " + std::to_string(layer.section_index) + " has average path length " +
                            fmt(layer.apl.value_or(0.0)) + " against ln(n) = " +
                            fmt(std::log(static_cast<double>(layer.node_count))) + " (deviation " +
                            fmt(*layer.deviation) + "); link its entities more directly."});
  }

  std::vector<bool> linked_flags;
  for (std::size_t i = 0; i < meta.layers.size(); ++i) {
    linked_flags.assign(meta.layers[i].concepts.size(), false);
    for (const auto& e : meta.intralayer) {
      if (e.layer != i) continue;
      linked_flags[e.r] = true;
      linked_flags[e.s] = true;
    }
    for (std::uint32_t c = 0; c < linked_flags.size(); ++c) {
      if (linked_flags[c]) continue;
      auto loc = at(meta.layers[i].section_index);
      loc.layer = i + 1;
      loc.community = c;
      std::string members;
      for (const auto& m : meta.layers[i].concepts[c].members) members += (members.empty() ? "" : ", ") + m;
      findings.push_back({FindingKind::isolated_concept, loc, 1.0,
                          "Concept " + concept_label(i + 1, c) + " in section " +
                              std::to_string(meta.layers[i].section_index) +
                              " has no link to other concepts of the section" +
                              (members.empty() ? std::string(".") : " (" + members + ").")});
    }
  }

  for (const auto& p : meta.pruned) {
    const auto kind = p.kind == MetaedgeKind::interlayer ? FindingKind::pruned_interlayer_link
                                                         : FindingKind::pruned_intralayer_link;
    auto loc = at(meta.layers.at(p.layer).section_index);
    loc.layer = p.layer + 1;
    loc.community = p.r;
    loc.other_layer = p.other_layer + 1;
    loc.other_section = meta.layers.at(p.other_layer).section_index;
    loc.other_community = p.s;
    findings.push_back({kind, loc, 1.0,
                        "Weak link between concepts " + concept_label(p.layer + 1, p.r) + " and " +
                            concept_label(p.other_layer + 1, p.s) + " (weight " + fmt(p.weight) + " < fence " +
                            fmt(p.fence) + "); strengthen the connection between them."});
  }

  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.severity > b.severity;
  });
  return findings;
}

nlohmann::ordered_json report_to_json(const CohesionReport& r) {
  using nlohmann::ordered_json;
  ordered_json prov;
  prov["provider"] = r.provenance.provider;
  prov["quartile_method"] = r.provenance.quartile_method;
  prov["log_base"] = r.provenance.log_base;
  prov["low_slic_rule"] = r.provenance.low_slic_rule;
  prov["threshold_scope"] = r.provenance.threshold_scope;
  prov["extractor"] = r.provenance.extractor;
  prov["seed"] = r.provenance.seed;
  prov["interlayer_cutoff"] = r.provenance.interlayer_cutoff;
  put_optional(prov, "intralayer_fence", r.provenance.intralayer_fence);
  put_optional(prov, "interlayer_fence", r.provenance.interlayer_fence);

  ordered_json sections = ordered_json::array();
  for (const auto& s : r.sections) {
    ordered_json j;
    j["index"] = s.index;
    j["skipped"] = s.skipped;
    j["slic"] = s.slic;
    j["slic_defined"] = s.slic_defined;
    j["components"] = s.components;
    j["nodes"] = s.nodes;
    j["edges"] = s.edges;
    j["sentences"] = s.sentences;
    j["below_filter"] = s.below_filter;
    put_optional(j, "lambda", s.lambda);
    ordered_json dropped = ordered_json::array();
    for (const auto& d : s.dropped_pairs) dropped.push_back({{"pair_index", d.pair_index}, {"score", d.score}});
    j["dropped_pairs"] = dropped;
    sections.push_back(std::move(j));
  }

  ordered_json doc;
  doc["eci"] = r.document.eci;
  doc["epi"] = r.document.epi;
  doc["cci"] = r.document.cci;
  doc["ici"] = r.document.ici;
  doc["k4_before"] = r.document.k4_before;
  doc["k4_after"] = r.document.k4_after;
  ordered_json per_layer = ordered_json::array();
  for (const auto& l : r.document.per_layer) {
    ordered_json j;
    j["section"] = l.section_index;
    j["wcc"] = l.wcc;
    put_optional(j, "apl", l.apl);
    j["nodes"] = l.node_count;
    put_optional(j, "deviation", l.deviation);
    j["isolated_metanodes"] = l.isolated_metanodes;
    j["metanodes"] = l.metanodes;
    per_layer.push_back(std::move(j));
  }
  doc["per_layer"] = per_layer;
  doc["annotations"] = r.document.annotations;

  ordered_json findings = ordered_json::array();
  for (const auto& f : r.findings) {
    ordered_json loc;
    loc["section"] = f.location.section;
    if (f.location.pair_index) loc["pair_index"] = *f.location.pair_index;
    if (f.location.layer) loc["layer"] = *f.location.layer;
    if (f.location.community) loc["community"] = *f.location.community;
    if (f.location.other_layer) loc["other_layer"] = *f.location.other_layer;
    if (f.location.other_section) loc["other_section"] = *f.location.other_section;
    if (f.location.other_community) loc["other_community"] = *f.location.other_community;
    ordered_json j;
    j["kind"] = to_string(f.kind);
    j["location"] = loc;
    j["severity"] = f.severity;
    j["message"] = f.message;
    findings.push_back(std::move(j));
  }

  ordered_json root;
  root["doc_id"] = r.doc_id;
  root["provenance"] = prov;
  root["sections"] = sections;
  root["document"] = doc;
  root["findings"] = findings;
  root["warnings"] = r.warnings;
  return root;
}

CohesionReport report_from_json(const nlohmann::json& j) {
  CohesionReport r;
  try {
    r.doc_id = j.at("doc_id").get<std::string>();
    const auto& p = j.at("provenance");
    r.provenance.provider = p.at("provider").get<std::string>();
    r.provenance.quartile_method = p.at("quartile_method").get<std::string>();
    r.provenance.log_base = p.at("log_base").get<std::string>();
    r.provenance.low_slic_rule = p.at("low_slic_rule").get<std::string>();
    r.provenance.threshold_scope = p.at("threshold_scope").get<std::string>();
    r.provenance.extractor = p.at("extractor").get<std::string>();
    r.provenance.seed = p.at("seed").get<std::uint64_t>();
    r.provenance.interlayer_cutoff = p.at("interlayer_cutoff").get<double>();
    r.provenance.intralayer_fence = get_optional<double>(p, "intralayer_fence");
    r.provenance.interlayer_fence = get_optional<double>(p, "interlayer_fence");

    for (const auto& s : j.at("sections")) {
      SectionSummary sec;
      sec.index = s.at("index").get<std::size_t>();
      sec.skipped = s.at("skipped").get<bool>();
      sec.slic = s.at("slic").get<double>();
      sec.slic_defined = s.at("slic_defined").get<bool>();
      sec.components = s.at("components").get<std::size_t>();
      sec.nodes = s.at("nodes").get<std::size_t>();
      sec.edges = s.at("edges").get<std::size_t>();
      sec.sentences = s.at("sentences").get<std::size_t>();
      sec.below_filter = s.at("below_filter").get<bool>();
      sec.lambda = get_optional<double>(s, "lambda");
      for (const auto& d : s.at("dropped_pairs"))
        sec.dropped_pairs.push_back({d.at("pair_index").get<std::size_t>(), d.at("score").get<double>()});
      r.sections.push_back(std::move(sec));
    }

    const auto& d = j.at("document");
    r.document.eci = d.at("eci").get<double>();
    r.document.epi = d.at("epi").get<double>();
    r.document.cci = d.at("cci").get<double>();
    r.document.ici = d.at("ici").get<double>();
    r.document.k4_before = d.at("k4_before").get<std::uint64_t>();
    r.document.k4_after = d.at("k4_after").get<std::uint64_t>();
    for (const auto& l : d.at("per_layer")) {
      PerLayerMetrics m;
      m.section_index = l.at("section").get<std::size_t>();
      m.wcc = l.at("wcc").get<double>();
      m.apl = get_optional<double>(l, "apl");
      m.node_count = l.at("nodes").get<std::size_t>();
      m.deviation = get_optional<double>(l, "deviation");
      m.isolated_metanodes = l.at("isolated_metanodes").get<std::size_t>();
      m.metanodes = l.at("metanodes").get<std::size_t>();
      r.document.per_layer.push_back(m);
    }
    r.document.annotations = d.at("annotations").get<std::vector<std::string>>();

    for (const auto& f : j.at("findings")) {
      Finding finding;
      finding.kind = finding_kind_from_string(f.at("kind").get<std::string>());
      const auto& loc = f.at("location");
      finding.location.section = loc.at("section").get<std::size_t>();
      finding.location.pair_index = get_optional<std::size_t>(loc, "pair_index");
      finding.location.layer = get_optional<std::size_t>(loc, "layer");
      finding.location.community = get_optional<std::uint32_t>(loc, "community");
      finding.location.other_layer = get_optional<std::size_t>(loc, "other_layer");
      finding.location.other_section = get_optional<std::size_t>(loc, "other_section");
      finding.location.other_community = get_optional<std::uint32_t>(loc, "other_community");
      finding.severity = f.at("severity").get<double>();
      finding.message = f.at("message").get<std::string>();
      r.findings.push_back(std::move(finding));
    }
    r.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(kModule, ErrorKind::ParseError, e.what());
  }
  return r;
}

namespace {

std::string render_markdown(const CohesionReport& r) {
  std::ostringstream md;
  md << "# Cohesion report: " << r.doc_id << "\n\n";
  md << "Provider: " << r.provenance.provider << "; quartiles: " << r.provenance.quartile_method
     << "; log base: " << r.provenance.log_base << "; seed: " << r.provenance.seed << "\n\n";

  md << "## Document indices\n\n";
  md << "| ECI | EPI | CCI | ICI | K4 before | K4 after |\n";
  md << "|-----|-----|-----|-----|-----------|----------|\n";
  md << "| " << fmt(r.document.eci) << " | " << fmt(r.document.epi) << " | " << fmt(r.document.cci) << " | "
     << fmt(r.document.ici) << " | " << r.document.k4_before << " | " << r.document.k4_after << " |\n\n";

  md << "## Sections\n\n";
  md << "| Section | SLIC | Components | Nodes | Edges | Sentences | Notes |\n";
  md << "|---------|------|------------|-------|-------|-----------|-------|\n";
  for (const auto& s : r.sections) {
    std::string notes;
    if (s.skipped) notes = "skipped";
    if (s.below_filter) notes += notes.empty() ? "below-filter" : ", below-filter";
    if (!s.skipped && !s.slic_defined) notes += notes.empty() ? "no edges" : ", no edges";
    md << "| " << s.index << " | " << (s.skipped ? "n/a" : fmt(s.slic)) << " | " << s.components << " | " << s.nodes
       << " | " << s.edges << " | " << s.sentences << " | " << notes << " |\n";
  }
  md << "\n## Findings\n\n";
  if (r.findings.empty()) {
    md << "All checks passed: no cohesion gaps flagged.\n";
  } else {
    std::map<std::size_t, std::vector<const Finding*>> by_section;
    for (const auto& f : r.findings) by_section[f.location.section].push_back(&f);
    for (const auto& [section, items] : by_section) {
      md << "### Section " << section << "\n\n";
      for (const auto* f : items) md << "- **" << to_string(f->kind) << "** (severity " << fmt(f->severity) << "): " << f->message << "\n";
      md << "\n";
    }
  }
  if (!r.warnings.empty()) {
    md << "\n## Warnings\n\n";
    for (const auto& w : r.warnings) md << "> " << w << "\n";
  }
  return md.str();
}

}  // namespace

std::string render_report(const CohesionReport& report, ReportFormat format) {
  if (format == ReportFormat::json) return report_to_json(report).dump(2) + "\n";
  return render_markdown(report);
}

}  // namespace cohesia
