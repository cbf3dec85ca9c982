#include "cohesia/eval_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cohesia/corpus_io.hpp"
#include "cohesia/error.hpp"

namespace cohesia::eval {

namespace {

constexpr std::string_view kModule = "eval_harness";

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw Error(kModule, ErrorKind::ParseError, "unterminated quote on CSV line " + std::to_string(line_no));
  for (auto& f : fields) {
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
    std::size_t start = f.find_first_not_of(" \t");
    f = start == std::string::npos ? std::string() : f.substr(start);
  }
  return fields;
}

std::uint64_t draw(std::mt19937_64& rng, std::size_t bound) { return rng() % bound; }

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[draw(rng, i)]);
}

std::array<std::string, 2> two_categories(const std::vector<CorpusRecord>& records) {
  std::set<std::string> cats;
  for (const auto& r : records) cats.insert(r.category);
  if (cats.size() != 2)
    throw Error(kModule, ErrorKind::DegenerateTable,
                "component contingency needs exactly two categories, found " + std::to_string(cats.size()));
  return {*cats.begin(), *std::next(cats.begin())};
}

struct SectionRef {
  std::size_t category = 0;
  bool multiple = false;
};

std::vector<SectionRef> section_refs(const std::vector<CorpusRecord>& records,
                                     const std::array<std::string, 2>& categories, bool apply_filters) {
  std::vector<SectionRef> refs;
  for (const auto& r : records) {
    const std::size_t col = r.category == categories[0] ? 0 : 1;
    for (const auto& s : r.sections)
      if (passes_filter(s, apply_filters)) refs.push_back({col, s.components > 1});
  }
  return refs;
}

Contingency tabulate(std::string variant, const std::array<std::string, 2>& categories,
                     const std::vector<SectionRef>& refs) {
  Contingency c;
  c.variant = std::move(variant);
  c.categories = categories;
  for (const auto& ref : refs) c.table[ref.multiple ? 0 : 1][ref.category] += 1.0;
  c.chi_square = stats::chi_square_independence(c.table);
  c.rates = category_rates(c.table, categories);
  return c;
}

}  // namespace

CorpusRecord make_record(const CohesionReport& report, std::string category) {
  return {report.doc_id, std::move(category), report.sections, report.document};
}

bool passes_filter(const SectionSummary& s, bool apply_filters) {
  if (s.skipped) return false;
  if (!apply_filters) return true;
  return s.sentences >= kMinFilterSentences && s.nodes >= kMinFilterNodes;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& manifest) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(read_file(manifest));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(kModule, ErrorKind::ParseError, e.what());
  }
  if (!root.is_array()) throw Error(kModule, ErrorKind::ParseError, "manifest must be a JSON list");
  std::vector<ManifestEntry> entries;
  const auto base = manifest.parent_path();
  for (const auto& item : root) {
    if (!item.is_object() || !item.contains("path") || !item["path"].is_string() || !item.contains("category") ||
        !item["category"].is_string())
      throw Error(kModule, ErrorKind::ParseError, "manifest entries need string 'path' and 'category'");
    std::filesystem::path p = item["path"].get<std::string>();
    if (p.is_relative()) p = base / p;
    auto category = item["category"].get<std::string>();
    if (category.empty()) throw Error(kModule, ErrorKind::ParseError, "empty category for " + p.string());
    entries.push_back({p, category});
  }
  return entries;
}

std::array<CategoryRate, 2> category_rates(const stats::Table2x2& table, const std::array<std::string, 2>& categories) {
  std::array<CategoryRate, 2> rates;
  for (std::size_t c = 0; c < 2; ++c) {
    rates[c].category = categories[c];
    rates[c].multiple = static_cast<std::size_t>(table[0][c]);
    rates[c].total = static_cast<std::size_t>(table[0][c] + table[1][c]);
    rates[c].probability = rates[c].total ? table[0][c] / (table[0][c] + table[1][c]) : 0.0;
  }
  return rates;
}

Contingency component_contingency(const std::vector<CorpusRecord>& records, bool apply_filters) {
  const auto cats = two_categories(records);
  return tabulate("all-sections", cats, section_refs(records, cats, apply_filters));
}

Contingency component_contingency_sampled_documents(const std::vector<CorpusRecord>& records,
                                                    std::size_t documents_per_category, std::uint64_t seed,
                                                    bool apply_filters) {
  const auto cats = two_categories(records);
  std::mt19937_64 rng(seed);
  std::vector<CorpusRecord> sampled;
  for (const auto& cat : cats) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < records.size(); ++i)
      if (records[i].category == cat) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return records[a].doc_id < records[b].doc_id; });
    shuffle(idx, rng);
    idx.resize(std::min(idx.size(), documents_per_category));
    for (auto i : idx) sampled.push_back(records[i]);
  }
  return tabulate("sampled-documents", cats, section_refs(sampled, cats, apply_filters));
}

Contingency component_contingency_balanced_sections(const std::vector<CorpusRecord>& records, std::uint64_t seed,
                                                    bool apply_filters) {
  const auto cats = two_categories(records);
  auto sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  auto refs = section_refs(sorted, cats, apply_filters);
  std::array<std::vector<SectionRef>, 2> by_cat;
  for (const auto& r : refs) by_cat[r.category].push_back(r);
  const std::size_t target = std::min(by_cat[0].size(), by_cat[1].size());
  std::mt19937_64 rng(seed);
  std::vector<SectionRef> balanced;
  for (auto& group : by_cat) {
    shuffle(group, rng);
    group.resize(target);
    balanced.insert(balanced.end(), group.begin(), group.end());
  }
  return tabulate("balanced-sections", cats, balanced);
}

ExternalIndexTable parse_external_csv(std::string_view text) {
  ExternalIndexTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fields = split_csv_line(line, line_no);
    if (header) {
      if (fields.size() < 3 || fields[0] != "doc_id" || fields[1] != "section_index")
        throw Error(kModule, ErrorKind::ParseError, "external CSV header must be doc_id,section_index,<index...>");
      table.columns.assign(fields.begin() + 2, fields.end());
      header = false;
      continue;
    }
    if (fields.size() != table.columns.size() + 2)
      throw Error(kModule, ErrorKind::ParseError, "CSV line " + std::to_string(line_no) + " has " +
                                                      std::to_string(fields.size()) + " fields");
    std::size_t section = 0;
    try {
      std::size_t used = 0;
      section = std::stoul(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument(fields[1]);
    } catch (const std::exception&) {
      throw Error(kModule, ErrorKind::ParseError, "bad section_index on CSV line " + std::to_string(line_no));
    }
    std::vector<double> values;
    for (std::size_t k = 2; k < fields.size(); ++k) {
      if (fields[k].empty()) {
        values.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      try {
        std::size_t used = 0;
        values.push_back(std::stod(fields[k], &used));
        if (used != fields[k].size()) throw std::invalid_argument(fields[k]);
      } catch (const std::exception&) {
        throw Error(kModule, ErrorKind::ParseError,
                    "non-numeric value '" + fields[k] + "' on CSV line " + std::to_string(line_no));
      }
    }
    table.rows[{fields[0], section}] = std::move(values);
  }
  if (header) throw Error(kModule, ErrorKind::ParseError, "external CSV is empty");
  return table;
}

ExternalIndexTable load_external_csv(const std::filesystem::path& path) { return parse_external_csv(read_file(path)); }

std::vector<Correlation> correlate_external(const std::vector<CorpusRecord>& records, const ExternalIndexTable& external,
                                            bool apply_filters) {
  struct Joined {
    double slic;
    const std::vector<double>* values;
  };
  std::vector<Joined> joined;
  auto sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  for (const auto& r : sorted) {
    for (const auto& s : r.sections) {
      if (!passes_filter(s, apply_filters) || !s.slic_defined) continue;
      auto it = external.rows.find({r.doc_id, s.index});
      if (it != external.rows.end()) joined.push_back({s.slic, &it->second});
    }
  }
  if (joined.empty()) throw Error(kModule, ErrorKind::JoinEmpty, "no (doc_id, section_index) rows matched the corpus");

  std::vector<Correlation> out;
  for (std::size_t k = 0; k < external.columns.size(); ++k) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& j : joined) {
      const double v = (*j.values)[k];
      if (std::isnan(v)) continue;
      xs.push_back(j.slic);
      ys.push_back(v);
    }
    if (xs.empty()) throw Error(kModule, ErrorKind::JoinEmpty, "column '" + external.columns[k] + "' has no joined values");
    out.push_back({external.columns[k], stats::pearson_correlation(xs, ys), xs.size()});
  }
  return out;
}

std::vector<double> epi_minmax(const std::vector<CorpusRecord>& records) {
  std::vector<double> out(records.size(), 0.0);
  if (records.empty()) return out;
  auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                      [](const auto& a, const auto& b) { return a.document.epi < b.document.epi; });
  const double min = lo->document.epi;
  const double range = hi->document.epi - min;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < records.size(); ++i) out[i] = (records[i].document.epi - min) / range;
  return out;
}

std::string metrics_csv(const std::vector<CorpusRecord>& records) {
  const auto normalized = epi_minmax(records);
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return records[a].doc_id < records[b].doc_id; });
  std::string out = "id,category,eci,epi,epi_minmax,cci,ici\n";
  for (auto i : order) {
    const auto& r = records[i];
    out += csv_field(r.doc_id) + "," + csv_field(r.category) + "," + num(r.document.eci) + "," + num(r.document.epi) +
           "," + num(normalized[i]) + "," + num(r.document.cci) + "," + num(r.document.ici) + "\n";
  }
  return out;
}

void export_metrics_csv(const std::vector<CorpusRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(kModule, ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  out << metrics_csv(records);
}

std::string section_slic_csv(const std::vector<CorpusRecord>& records, bool apply_filters) {
  auto sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.doc_id < b.doc_id; });
  std::string out = "doc_id,category,section_index,slic,components,sentences,nodes\n";
  for (const auto& r : sorted)
    for (const auto& s : r.sections)
      if (passes_filter(s, apply_filters))
        out += csv_field(r.doc_id) + "," + csv_field(r.category) + "," + std::to_string(s.index) + "," + num(s.slic) +
               "," + std::to_string(s.components) + "," + std::to_string(s.sentences) + "," + std::to_string(s.nodes) +
               "\n";
  return out;
}

std::map<std::string, stats::FiveNumberSummary> slic_summary_by_category(const std::vector<CorpusRecord>& records,
                                                                         bool apply_filters) {
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : records)
    for (const auto& s : r.sections)
      if (passes_filter(s, apply_filters) && s.slic_defined) values[r.category].push_back(s.slic);
  std::map<std::string, stats::FiveNumberSummary> out;
  for (const auto& [cat, v] : values) out[cat] = stats::five_number_summary(v);
  return out;
}

}  // namespace cohesia::eval
