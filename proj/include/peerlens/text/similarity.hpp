#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "peerlens/text/lexicon.hpp"
#include "peerlens/text/tokenizer.hpp"

namespace peerlens::text {

/// Dense text embeddings from an external model (e.g. a SPECTER server).
/// Implementations must be thread-safe.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  /// Throws Error{kBackendError} on failure.
  virtual std::vector<double> embed(std::string_view text) const = 0;
  virtual std::string id() const = 0;
};

/// Embeddings from an OpenAI-compatible `POST {base}/v1/embeddings` endpoint.
class HttpEmbeddingBackend final : public EmbeddingBackend {
 public:
  struct Config {
    std::string base_url;
    std::string model;
    std::string api_key;
    std::chrono::seconds timeout{60};
  };

  explicit HttpEmbeddingBackend(Config config);
  std::vector<double> embed(std::string_view text) const override;
  std::string id() const override { return "http:" + config_.model; }

 private:
  Config config_;
};

/// Cosine similarity of two raw vectors; 0 when either has zero norm.
double cosine(const std::vector<double>& a, const std::vector<double>& b);

/// Term-frequency cosine over stopword-filtered tokens, in [0, 1].
/// Returns 0 when either side has no content tokens.
double lexical_similarity(const TokenizedText& a, const TokenizedText& b, const Lexicon& stopwords);

/// Document similarity in [0, 1]. With a backend, the embedding cosine is
/// mapped from [-1, 1] to [0, 1]; without one the lexical fallback is used.
/// Throws EmptyText if either text has no tokens.
double paper_similarity(const TokenizedText& review, const TokenizedText& paper,
                        const Lexicon& stopwords, const EmbeddingBackend* backend);

}  // namespace peerlens::text
