#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cohesia/corpus_io.hpp"
#include "cohesia/wordlists.hpp"

namespace cohesia {

struct CoherenceScore {
  std::size_t pair_index = 0;  // 1-based: pair k joins sentences k and k+1
  double score = 0.0;

  bool operator==(const CoherenceScore&) const = default;
};

struct EntityEmbedding {
  std::string entity;
  std::vector<double> vector;
  std::size_t context_count = 0;
};

struct ProviderCapabilities {
  bool coherence = true;
  bool embedding = true;
};

struct ProviderMetadata {
  std::string name;
  std::size_t dim = 0;
  std::string model;
};

/// Source of sequential-coherence scores and section-specific entity
/// embeddings. Implementations must be deterministic and safe to call from
/// several threads at once.
class SemanticProvider {
 public:
  virtual ~SemanticProvider() = default;

  virtual std::string name() const = 0;
  virtual ProviderCapabilities capabilities() const { return {}; }
  virtual std::size_t dimension() const = 0;

  /// s-1 scores for a section of s >= 2 sentences. Throws TooFewSentences.
  virtual std::vector<CoherenceScore> score_pairs(const Section& section) const = 0;

  /// One embedding per entity, in input order. Throws EntityAbsent.
  virtual std::vector<EntityEmbedding> embed_entities(const Section& section,
                                                      std::span<const std::string> entities) const = 0;
};

/// cos(a, b); 0 if either vector is all zeros. Throws LengthMismatch.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct SurrogateOptions {
  std::size_t dimension = 1024;  // hashed context-feature space
  std::size_t window = 3;        // tokens on each side, within a sentence
};

/// Dependency-free provider. Coherence is the cosine of content-token
/// frequency vectors of the two sentences (range [0, 1]). Embeddings are
/// positive-PMI context vectors over a +/-window token window, hashed into a
/// fixed-length space and averaged over the entity's mentions.
class SurrogateProvider final : public SemanticProvider {
 public:
  explicit SurrogateProvider(SurrogateOptions options = {}, const WordSet* stopwords = nullptr);

  std::string name() const override { return "surrogate"; }
  std::size_t dimension() const override { return options_.dimension; }
  std::vector<CoherenceScore> score_pairs(const Section& section) const override;
  std::vector<EntityEmbedding> embed_entities(const Section& section,
                                              std::span<const std::string> entities) const override;

  /// Bucket of a context word in the hashed feature space (FNV-1a).
  std::size_t feature_index(std::string_view word) const;

 private:
  bool is_content(std::string_view token) const;

  SurrogateOptions options_;
  const WordSet* stopwords_;
};

/// Client for the HTTP sidecar. Every call opens its own connection, so one
/// instance can serve concurrent sections.
class RemoteProvider final : public SemanticProvider {
 public:
  /// Runs the health check; throws ProviderUnavailable if it fails.
  explicit RemoteProvider(std::string endpoint, int timeout_seconds = 30);

  std::string name() const override { return "remote:" + metadata_.name; }
  std::size_t dimension() const override { return metadata_.dim; }
  const ProviderMetadata& metadata() const { return metadata_; }
  const std::string& endpoint() const { return endpoint_; }

  std::vector<CoherenceScore> score_pairs(const Section& section) const override;
  std::vector<EntityEmbedding> embed_entities(const Section& section,
                                              std::span<const std::string> entities) const override;

 private:
  std::string endpoint_;
  int timeout_seconds_;
  ProviderMetadata metadata_;
};

/// GET /v1/health. Throws ProviderUnavailable when unreachable, on a non-200
/// reply, on a malformed body, or when the reported dim is 0.
ProviderMetadata remote_health_check(const std::string& endpoint, int timeout_seconds = 5);

}  // namespace cohesia
