#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "cohesia/error.hpp"
#include "cohesia/semantics.hpp"

namespace cohesia {

namespace {

constexpr std::string_view kModule = "semantics";

bool has_letter(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalpha(u) || u >= 0x80;
  });
}

}  // namespace

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(kModule, ErrorKind::LengthMismatch,
                "vector lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

SurrogateProvider::SurrogateProvider(SurrogateOptions options, const WordSet* stopwords)
    : options_(options), stopwords_(stopwords ? stopwords : &default_stopwords()) {
  if (options_.dimension == 0) throw Error(kModule, ErrorKind::InvalidArgument, "surrogate dimension must be > 0");
}

bool SurrogateProvider::is_content(std::string_view token) const {
  return has_letter(token) && !stopwords_->contains(token);
}

std::size_t SurrogateProvider::feature_index(std::string_view word) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : word) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h % options_.dimension);
}

std::vector<CoherenceScore> SurrogateProvider::score_pairs(const Section& section) const {
  if (section.sentences.size() < 2)
    throw Error(kModule, ErrorKind::TooFewSentences,
                "section " + std::to_string(section.index) + " has " + std::to_string(section.sentences.size()) +
                    " sentence(s)");
  auto term_frequencies = [&](const Sentence& s) {
    std::map<std::string_view, double> tf;
    for (const auto& t : s.tokens)
      if (is_content(t)) tf[t] += 1.0;
    return tf;
  };
  std::vector<CoherenceScore> scores;
  scores.reserve(section.sentences.size() - 1);
  auto prev = term_frequencies(section.sentences.front());
  for (std::size_t k = 1; k < section.sentences.size(); ++k) {
    auto next = term_frequencies(section.sentences[k]);
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (const auto& [term, f] : prev) {
      na += f * f;
      auto it = next.find(term);
      if (it != next.end()) dot += f * it->second;
    }
    for (const auto& [term, f] : next) nb += f * f;
    const double score = (na == 0.0 || nb == 0.0) ? 0.0 : std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
    scores.push_back({k, score});
    prev = std::move(next);
  }
  return scores;
}

std::vector<EntityEmbedding> SurrogateProvider::embed_entities(const Section& section,
                                                               std::span<const std::string> entities) const {
  const std::size_t window = options_.window;

  // Column marginals: content words seen in the window of any token position.
  std::unordered_map<std::string_view, double> column;
  double total = 0.0;
  for (const auto& sentence : section.sentences) {
    const auto& tokens = sentence.tokens;
    for (std::size_t p = 0; p < tokens.size(); ++p) {
      const std::size_t lo = p > window ? p - window : 0;
      const std::size_t hi = std::min(tokens.size(), p + window + 1);
      for (std::size_t q = lo; q < hi; ++q) {
        if (q == p || !is_content(tokens[q])) continue;
        column[tokens[q]] += 1.0;
        total += 1.0;
      }
    }
  }

  std::vector<EntityEmbedding> out;
  out.reserve(entities.size());
  for (const auto& entity : entities) {
    const auto spans = find_occurrences(section, entity);
    if (spans.empty())
      throw Error(kModule, ErrorKind::EntityAbsent,
                  "'" + entity + "' does not occur in section " + std::to_string(section.index));

    // Context words of each mention, excluding the mention itself.
    std::vector<std::vector<std::string_view>> contexts;
    contexts.reserve(spans.size());
    std::map<std::string_view, double> row;
    double row_total = 0.0;
    for (const auto& span : spans) {
      const auto& tokens = section.sentences[span.sentence - 1].tokens;
      const std::size_t lo = span.position > window ? span.position - window : 0;
      const std::size_t hi = std::min(tokens.size(), span.position + span.length + window);
      std::vector<std::string_view> ctx;
      for (std::size_t q = lo; q < hi; ++q) {
        if (q >= span.position && q < span.position + span.length) continue;
        if (!is_content(tokens[q])) continue;
        ctx.push_back(tokens[q]);
        row[tokens[q]] += 1.0;
        row_total += 1.0;
      }
      contexts.push_back(std::move(ctx));
    }

    std::map<std::string_view, double> ppmi;
    for (const auto& [word, count] : row) {
      const double pmi = std::log(count * total / (row_total * column.at(word)));
      ppmi[word] = std::max(0.0, pmi);
    }

    EntityEmbedding emb;
    emb.entity = entity;
    emb.context_count = spans.size();
    emb.vector.assign(options_.dimension, 0.0);
    for (const auto& ctx : contexts)
      for (auto word : ctx) emb.vector[feature_index(word)] += ppmi.at(word);
    for (auto& x : emb.vector) x /= static_cast<double>(spans.size());
    out.push_back(std::move(emb));
  }
  return out;
}

}  // namespace cohesia
