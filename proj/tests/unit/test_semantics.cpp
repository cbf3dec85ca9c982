#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cohesia/corpus_io.hpp"
#include "cohesia/error.hpp"
#include "cohesia/semantics.hpp"

using namespace cohesia;

namespace {

Section section_of(const std::string& text) {
  Section s;
  s.index = 1;
  s.sentences = segment_sentences(text);
  return s;
}

Section section_of_lines(const std::vector<std::string>& lines) {
  Section s;
  s.index = 1;
  for (std::size_t i = 0; i < lines.size(); ++i) s.sentences.push_back({i + 1, lines[i], tokenize(lines[i])});
  return s;
}

}  // namespace

TEST(Cosine, Basics) {
  EXPECT_DOUBLE_EQ(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(std::vector<double>{1, 2}, std::vector<double>{2, 4}), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{-1, 0}), -1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}), 0.0);
  EXPECT_THROW(cosine_similarity(std::vector<double>{1}, std::vector<double>{1, 2}), Error);
}

TEST(Cosine, AlwaysInRange) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(8), b(8);
    for (auto& x : a) x = n01(rng);
    for (auto& x : b) x = n01(rng);
    const double c = cosine_similarity(a, b);
    EXPECT_GE(c, -1.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(SurrogateScores, HandExamples) {
  SurrogateProvider p;
  auto scores = p.score_pairs(section_of_lines({"the cat sat", "the cat slept"}));
  ASSERT_EQ(scores.size(), 1u);
  EXPECT_EQ(scores[0].pair_index, 1u);
  EXPECT_NEAR(scores[0].score, 0.5, 1e-15);

  EXPECT_DOUBLE_EQ(p.score_pairs(section_of("Graphs model text. Graphs model text."))[0].score, 1.0);
  EXPECT_DOUBLE_EQ(p.score_pairs(section_of("Graphs model text. Birds sing loudly."))[0].score, 0.0);
}

TEST(SurrogateScores, CountAndSymmetry) {
  SurrogateProvider p;
  auto s = section_of("Alpha beta gamma. Beta delta. Gamma alpha alpha. Omega.");
  auto scores = p.score_pairs(s);
  ASSERT_EQ(scores.size(), 3u);
  for (std::size_t k = 0; k < scores.size(); ++k) {
    EXPECT_EQ(scores[k].pair_index, k + 1);
    auto swapped = section_of_lines({s.sentences[k + 1].raw, s.sentences[k].raw});
    EXPECT_EQ(p.score_pairs(swapped)[0].score, scores[k].score);
    EXPECT_GE(scores[k].score, 0.0);
    EXPECT_LE(scores[k].score, 1.0);
  }
  EXPECT_EQ(p.score_pairs(s), scores);
}

TEST(SurrogateScores, TooFewSentences) {
  SurrogateProvider p;
  try {
    p.score_pairs(section_of("Only one."));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewSentences);
  }
}

TEST(SurrogateEmbeddings, HandComputedPpmi) {
  // One sentence "alpha beta gamma", window 3. Every position sees the other
  // two words, so each column total is 2 and the grand total 6. For alpha the
  // row is {beta: 1, gamma: 1}, so pmi = ln(1 * 6 / (2 * 2)) = ln 1.5 each.
  SurrogateProvider p;
  auto s = section_of_lines({"alpha beta gamma"});
  const std::vector<std::string> ents = {"alpha"};
  auto e = p.embed_entities(s, ents);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].context_count, 1u);
  ASSERT_EQ(e[0].vector.size(), p.dimension());
  std::vector<double> expected(p.dimension(), 0.0);
  expected[p.feature_index("beta")] += std::log(1.5);
  expected[p.feature_index("gamma")] += std::log(1.5);
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(e[0].vector[i], expected[i], 1e-15);
}

TEST(SurrogateEmbeddings, NegativePmiIsClipped) {
  // Window 1 over "common rare common common common". Context sets per
  // position: {rare}, {common, common}, {rare, common}, {common, common},
  // {common}; column totals common = 6, rare = 2, grand total 8.
  SurrogateOptions opts;
  opts.window = 1;
  SurrogateProvider p(opts);
  auto s = section_of_lines({"common rare common common common"});
  const std::vector<std::string> ents = {"rare"};
  auto e = p.embed_entities(s, ents);
  // rare: row {common: 2}, pmi = ln(2 * 8 / (2 * 6)).
  EXPECT_NEAR(e[0].vector[p.feature_index("common")], std::log(4.0 / 3.0) * 2.0, 1e-15);

  // common: four mentions, row {rare: 2, common: 4}; pmi(common) = ln(32/36) clips to 0.
  const std::vector<std::string> c = {"common"};
  auto ec = p.embed_entities(s, c);
  EXPECT_EQ(ec[0].context_count, 4u);
  const double expect_rare = std::log(16.0 / 12.0) * 2.0 / 4.0;
  EXPECT_NEAR(ec[0].vector[p.feature_index("rare")], expect_rare, 1e-15);
  if (p.feature_index("common") != p.feature_index("rare")) {
    EXPECT_DOUBLE_EQ(ec[0].vector[p.feature_index("common")], 0.0);
  }
}

TEST(SurrogateEmbeddings, IdenticalNeighbourhoodsGiveCosineOne) {
  SurrogateProvider p;
  auto s = section_of_lines({"red apple tastes sweet", "green apple tastes sweet"});
  const std::vector<std::string> ents = {"red", "green"};
  auto e = p.embed_entities(s, ents);
  EXPECT_NEAR(cosine_similarity(e[0].vector, e[1].vector), 1.0, 1e-12);
}

TEST(SurrogateEmbeddings, NonNegativeAndDeterministic) {
  SurrogateProvider p;
  auto s = section_of("Networks link entities in text. Entities form communities in networks. Text has structure.");
  const std::vector<std::string> ents = {"networks", "entities", "text"};
  auto a = p.embed_entities(s, ents);
  auto b = p.embed_entities(s, ents);
  for (std::size_t i = 0; i < ents.size(); ++i) {
    EXPECT_EQ(a[i].vector, b[i].vector);
    EXPECT_EQ(a[i].entity, ents[i]);
    for (double x : a[i].vector) EXPECT_GE(x, 0.0);
    for (std::size_t j = 0; j < ents.size(); ++j) {
      const double c = cosine_similarity(a[i].vector, a[j].vector);
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 1.0);
    }
  }
}

TEST(SurrogateEmbeddings, AbsentEntity) {
  SurrogateProvider p;
  const std::vector<std::string> ents = {"zebra"};
  try {
    p.embed_entities(section_of("Graphs model text."), ents);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EntityAbsent);
  }
}

TEST(SurrogateEmbeddings, MultiTokenEntityExcludesItself) {
  SurrogateProvider p;
  auto s = section_of_lines({"deep learning models work"});
  const std::vector<std::string> ents = {"deep learning"};
  auto e = p.embed_entities(s, ents);
  EXPECT_EQ(e[0].context_count, 1u);
  double mass_on_self = e[0].vector[p.feature_index("deep")] + e[0].vector[p.feature_index("learning")];
  if (p.feature_index("deep") != p.feature_index("models") && p.feature_index("deep") != p.feature_index("work") &&
      p.feature_index("learning") != p.feature_index("models") && p.feature_index("learning") != p.feature_index("work")) {
    EXPECT_DOUBLE_EQ(mass_on_self, 0.0);
  }
}
