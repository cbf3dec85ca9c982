#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cohesia/error.hpp"
#include "cohesia/eval_harness.hpp"
#include "oracles.hpp"

using namespace cohesia;
using namespace cohesia::eval;

namespace {

SectionSummary sec(std::size_t index, std::size_t components, double slic = 0.5, std::size_t sentences = 8,
                   std::size_t nodes = 6) {
  SectionSummary s;
  s.index = index;
  s.components = components;
  s.slic = slic;
  s.slic_defined = slic > 0;
  s.sentences = sentences;
  s.nodes = nodes;
  return s;
}

// Spreads `multiple` and `single` sections over `docs` documents of one category.
void add_category(std::vector<CorpusRecord>& out, const std::string& category, std::size_t multiple,
                  std::size_t single, std::size_t docs) {
  std::vector<CorpusRecord> recs(docs);
  for (std::size_t d = 0; d < docs; ++d) {
    recs[d].doc_id = category + "-" + std::to_string(1000 + d);
    recs[d].category = category;
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < multiple + single; ++i, ++k) {
    auto& r = recs[k % docs];
    r.sections.push_back(sec(r.sections.size() + 1, i < multiple ? 2 : 1));
  }
  out.insert(out.end(), recs.begin(), recs.end());
}

std::vector<CorpusRecord> published_corpus() {
  std::vector<CorpusRecord> recs;
  add_category(recs, "Pos", 42, 1133, 40);
  add_category(recs, "Neg", 101, 548, 25);
  return recs;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Filter, SkippedAndSmallSections) {
  EXPECT_TRUE(passes_filter(sec(1, 1), true));
  EXPECT_FALSE(passes_filter(sec(1, 1, 0.5, 5), true));
  EXPECT_FALSE(passes_filter(sec(1, 1, 0.5, 8, 3), true));
  EXPECT_TRUE(passes_filter(sec(1, 1, 0.5, 6, 4), true));
  EXPECT_TRUE(passes_filter(sec(1, 1, 0.5, 2, 2), false));
  auto s = sec(1, 1);
  s.skipped = true;
  EXPECT_FALSE(passes_filter(s, false));
}

TEST(Contingency, ReconstructsPublishedCounts) {
  const auto c = component_contingency(published_corpus());
  EXPECT_EQ(c.categories[0], "Neg");
  EXPECT_EQ(c.categories[1], "Pos");
  EXPECT_EQ(c.table[0][0], 101);
  EXPECT_EQ(c.table[0][1], 42);
  EXPECT_EQ(c.table[1][0], 548);
  EXPECT_EQ(c.table[1][1], 1133);
  EXPECT_NEAR(c.chi_square.statistic, oracle::chi_square(c.table), 1e-9);
  EXPECT_LT(c.chi_square.p_value, 1e-3);
  EXPECT_EQ(c.rates[0].multiple, 101u);
  EXPECT_EQ(c.rates[0].total, 649u);
  EXPECT_DOUBLE_EQ(c.rates[0].probability, 101.0 / 649.0);
  EXPECT_EQ(c.rates[1].total, 1175u);
  EXPECT_DOUBLE_EQ(c.rates[1].probability, 42.0 / 1175.0);
}

TEST(Contingency, IdenticalProportionsGiveZero) {
  std::vector<CorpusRecord> recs;
  add_category(recs, "A", 10, 30, 4);
  add_category(recs, "B", 20, 60, 5);
  const auto c = component_contingency(recs);
  EXPECT_NEAR(c.chi_square.statistic, 0.0, 1e-12);
  EXPECT_NEAR(c.chi_square.p_value, 1.0, 1e-12);
}

TEST(Contingency, NeedsExactlyTwoCategories) {
  std::vector<CorpusRecord> one;
  add_category(one, "A", 3, 3, 2);
  EXPECT_EQ(kind_of([&] { component_contingency(one); }), ErrorKind::DegenerateTable);
  auto three = one;
  add_category(three, "B", 3, 3, 2);
  add_category(three, "C", 3, 3, 2);
  EXPECT_EQ(kind_of([&] { component_contingency(three); }), ErrorKind::DegenerateTable);
}

TEST(Contingency, ZeroMarginIsDegenerate) {
  std::vector<CorpusRecord> recs;
  add_category(recs, "A", 0, 5, 1);
  add_category(recs, "B", 0, 7, 1);
  EXPECT_EQ(kind_of([&] { component_contingency(recs); }), ErrorKind::DegenerateTable);
}

TEST(Contingency, FiltersApplyToSections) {
  std::vector<CorpusRecord> recs;
  add_category(recs, "A", 2, 2, 1);
  add_category(recs, "B", 2, 2, 1);
  recs[0].sections.push_back(sec(9, 2, 0.5, 3));  // too short
  EXPECT_EQ(component_contingency(recs).table[0][0], 2);
  EXPECT_EQ(component_contingency(recs, false).table[0][0], 3);
}

TEST(Contingency, SampledDocumentsDeterministic) {
  const auto recs = published_corpus();
  const auto a = component_contingency_sampled_documents(recs, 10, 7);
  const auto b = component_contingency_sampled_documents(recs, 10, 7);
  EXPECT_EQ(a.table, b.table);
  EXPECT_EQ(a.variant, "sampled-documents");
  // Input order does not matter: documents are sorted before shuffling.
  auto reversed = recs;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(component_contingency_sampled_documents(reversed, 10, 7).table, a.table);
  // Ten of 25 and ten of 40 documents.
  EXPECT_LT(a.rates[0].total, 649u);
  EXPECT_LT(a.rates[1].total, 1175u);
  // Asking for more documents than exist keeps everything.
  EXPECT_EQ(component_contingency_sampled_documents(recs, 1000, 7).table, component_contingency(recs).table);
}

TEST(Contingency, BalancedSectionsEqualColumns) {
  const auto recs = published_corpus();
  const auto c = component_contingency_balanced_sections(recs, 3);
  EXPECT_EQ(c.rates[0].total, 649u);
  EXPECT_EQ(c.rates[1].total, 649u);
  EXPECT_EQ(c.table[0][0], 101);  // the smaller category is kept whole
  EXPECT_EQ(c.table, component_contingency_balanced_sections(recs, 3).table);
}

TEST(Correlation, PerfectPositiveAndNegative) {
  std::vector<CorpusRecord> recs(1);
  recs[0].doc_id = "d";
  recs[0].category = "A";
  std::string csv = "doc_id,section_index,up,down\n";
  for (std::size_t i = 1; i <= 6; ++i) {
    recs[0].sections.push_back(sec(i, 1, 0.1 * static_cast<double>(i)));
    csv += "d," + std::to_string(i) + "," + std::to_string(3.0 * static_cast<double>(i) + 1.0) + "," +
           std::to_string(-2.0 * static_cast<double>(i)) + "\n";
  }
  const auto result = correlate_external(recs, parse_external_csv(csv));
  ASSERT_EQ(result.size(), 2u);
  EXPECT_EQ(result[0].index_name, "up");
  EXPECT_NEAR(result[0].pearson_r, 1.0, 1e-12);
  EXPECT_NEAR(result[1].pearson_r, -1.0, 1e-12);
  EXPECT_EQ(result[0].n, 6u);
}

TEST(Correlation, NoisyLinearRelation) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::uniform_real_distribution<double> slic(0.1, 1.0);
  std::vector<CorpusRecord> recs(1);
  recs[0].doc_id = "d";
  std::string csv = "doc_id,section_index,ext\n";
  for (std::size_t i = 1; i <= 50; ++i) {
    const double s = slic(rng);
    recs[0].sections.push_back(sec(i, 1, s));
    csv += "d," + std::to_string(i) + "," + std::to_string(2.0 * s + noise(rng)) + "\n";
  }
  EXPECT_GT(correlate_external(recs, parse_external_csv(csv))[0].pearson_r, 0.9);
}

TEST(Correlation, JoinsOnlyMatchingFilteredSections) {
  std::vector<CorpusRecord> recs(1);
  recs[0].doc_id = "d";
  for (std::size_t i = 1; i <= 4; ++i) recs[0].sections.push_back(sec(i, 1, static_cast<double>(i)));
  recs[0].sections.push_back(sec(5, 1, 100.0, 2));  // filtered out
  const auto csv = "doc_id,section_index,x\nd,1,1\nd,2,2\nd,3,\nd,4,4\nd,5,-50\nother,1,9\n";
  const auto r = correlate_external(recs, parse_external_csv(csv));
  EXPECT_EQ(r[0].n, 3u);
  EXPECT_NEAR(r[0].pearson_r, 1.0, 1e-12);
}

TEST(Correlation, EmptyJoin) {
  std::vector<CorpusRecord> recs(1);
  recs[0].doc_id = "d";
  recs[0].sections.push_back(sec(1, 1));
  EXPECT_EQ(kind_of([&] { correlate_external(recs, parse_external_csv("doc_id,section_index,x\ne,1,2\n")); }),
            ErrorKind::JoinEmpty);
}

TEST(ExternalCsv, ParsingErrors) {
  EXPECT_EQ(kind_of([] { parse_external_csv(""); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_external_csv("doc,section,x\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_external_csv("doc_id,section_index,x\nd,1\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_external_csv("doc_id,section_index,x\nd,one,2\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_external_csv("doc_id,section_index,x\nd,1,abc\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_external_csv("doc_id,section_index,x\n\"d,1,2\n"); }), ErrorKind::ParseError);
}

TEST(ExternalCsv, QuotedIdsAndBlankCells) {
  const auto t = parse_external_csv("doc_id,section_index,a,b\n\"x, y\",2,1.5,\n");
  ASSERT_EQ(t.columns.size(), 2u);
  const auto& row = t.rows.at({"x, y", 2});
  EXPECT_DOUBLE_EQ(row[0], 1.5);
  EXPECT_TRUE(std::isnan(row[1]));
}

TEST(MetricsExport, MinMaxEndpoints) {
  std::vector<CorpusRecord> recs(3);
  recs[0].document.epi = 2.0;
  recs[1].document.epi = 4.0;
  recs[2].document.epi = 3.0;
  const auto n = epi_minmax(recs);
  EXPECT_DOUBLE_EQ(n[0], 0.0);
  EXPECT_DOUBLE_EQ(n[1], 1.0);
  EXPECT_DOUBLE_EQ(n[2], 0.5);
  recs[1].document.epi = recs[2].document.epi = 2.0;
  for (double v : epi_minmax(recs)) EXPECT_EQ(v, 0.0);
}

TEST(MetricsExport, CsvRowsSortedById) {
  std::vector<CorpusRecord> recs(2);
  recs[0].doc_id = "zeta";
  recs[0].category = "Pos";
  recs[0].document.eci = 0.25;
  recs[0].document.epi = 1.0;
  recs[1].doc_id = "alpha";
  recs[1].category = "Neg";
  recs[1].document.epi = 3.0;
  recs[1].document.ici = 0.5;
  EXPECT_EQ(metrics_csv(recs),
            "id,category,eci,epi,epi_minmax,cci,ici\n"
            "alpha,Neg,0,3,1,0,0.5\n"
            "zeta,Pos,0.25,1,0,0,0\n");
}

TEST(MetricsExport, SectionCsvSkipsFiltered) {
  std::vector<CorpusRecord> recs(1);
  recs[0].doc_id = "d";
  recs[0].category = "A";
  recs[0].sections = {sec(1, 2, 0.5), sec(2, 1, 0.25, 2)};
  EXPECT_EQ(section_slic_csv(recs),
            "doc_id,category,section_index,slic,components,sentences,nodes\n"
            "d,A,1,0.5,2,8,6\n");
  EXPECT_EQ(section_slic_csv(recs, false).size(), section_slic_csv(recs).size() + std::string("d,A,2,0.25,1,2,6\n").size());
}

TEST(MetricsExport, SlicSummary) {
  std::vector<CorpusRecord> recs(2);
  recs[0].category = "A";
  recs[1].category = "B";
  for (std::size_t i = 1; i <= 5; ++i) recs[0].sections.push_back(sec(i, 1, static_cast<double>(i)));
  recs[1].sections.push_back(sec(1, 1, 7.0));
  const auto s = slic_summary_by_category(recs);
  EXPECT_DOUBLE_EQ(s.at("A").median, 3.0);
  EXPECT_DOUBLE_EQ(s.at("A").q1, 2.0);
  EXPECT_DOUBLE_EQ(s.at("B").max, 7.0);
}

TEST(Manifest, ResolvesRelativePaths) {
  const auto dir = std::filesystem::temp_directory_path() / "cohesia_manifest_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "m.json") << R"([{"path": "a.json", "category": "Pos"}, {"path": "/abs/b.txt", "category": "Neg"}])";
  const auto m = load_manifest(dir / "m.json");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].path, dir / "a.json");
  EXPECT_EQ(m[0].category, "Pos");
  EXPECT_EQ(m[1].path, std::filesystem::path("/abs/b.txt"));
  std::ofstream(dir / "bad.json") << R"({"path": "a"})";
  EXPECT_EQ(kind_of([&] { load_manifest(dir / "bad.json"); }), ErrorKind::ParseError);
  std::ofstream(dir / "bad2.json") << R"([{"path": "a"}])";
  EXPECT_EQ(kind_of([&] { load_manifest(dir / "bad2.json"); }), ErrorKind::ParseError);
  std::filesystem::remove_all(dir);
}
