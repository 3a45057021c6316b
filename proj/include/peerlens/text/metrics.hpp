#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "peerlens/text/lexicon.hpp"
#include "peerlens/text/similarity.hpp"
#include "peerlens/text/tokenizer.hpp"

namespace peerlens::text {

struct StructuredMetrics {
  std::size_t review_length_tokens = 0;
  double hedge_density = 0.0;      // [0, 1]
  double lexical_diversity = 0.0;  // (0, 1]
  double readability_fre = 0.0;    // unbounded
  double politeness = 0.0;         // [-1, 1]
  double sentiment = 0.0;          // [-1, 1]
  double paper_similarity = 0.0;   // [0, 1]
  std::size_t structure_mentions = 0;
  std::size_t citation_mentions = 0;
  std::size_t question_count = 0;
  bool has_questions = false;

  bool operator==(const StructuredMetrics&) const = default;
};

struct QuestionStats {
  std::size_t count = 0;
  bool present = false;
};

// Lexicon-free metrics. Those taking TokenizedText throw Error{kEmptyText}
// when it has no tokens.

double lexical_diversity(const TokenizedText& t);

/// Vowel groups (a, e, i, o, u, y), minus one for a silent final 'e' unless
/// the word ends in "le", never less than one.
int syllable_count(std::string_view word);

double readability_fre(const TokenizedText& t);

/// Figure/Fig./Table/Section/Sec./§/Equation/Eq./Algorithm/Appendix/Line/Page
/// followed by an identifier such as "2", "3.2", "4b" (case-insensitive).
std::size_t structure_mentions(std::string_view text);

/// Bracketed numeric citations, "(Name, YYYY)" parentheticals, "et al.",
/// "arXiv:" identifiers and "doi" tokens. Overlapping forms count once.
std::size_t citation_mentions(std::string_view text);

QuestionStats detect_questions(const TokenizedText& t);

/// Fraction of tokens flagged as hedges. Swappable for a model-backed detector.
class HedgeDetector {
 public:
  virtual ~HedgeDetector() = default;
  virtual double density(const TokenizedText& t) const = 0;
};

class LexiconHedgeDetector final : public HedgeDetector {
 public:
  explicit LexiconHedgeDetector(const Lexicon& cues) : cues_(cues) {}
  double density(const TokenizedText& t) const override;

 private:
  const Lexicon& cues_;
};

class QuestionDetector {
 public:
  virtual ~QuestionDetector() = default;
  virtual QuestionStats detect(const TokenizedText& t) const = 0;
};

/// Counts sentences whose last character is '?'.
class TerminalMarkQuestionDetector final : public QuestionDetector {
 public:
  QuestionStats detect(const TokenizedText& t) const override { return detect_questions(t); }
};

/// (P - N) / max(1, P + N) for positive and negative lexicon hit counts.
double polarity_score(std::size_t positive_hits, std::size_t negative_hits);

/// Computes the full structured-metric bundle. Holds shared, immutable
/// lexicons; every method is safe to call concurrently.
class TextMetrics {
 public:
  explicit TextMetrics(std::shared_ptr<const LexiconSet> lexicons = nullptr,
                       std::shared_ptr<const EmbeddingBackend> embeddings = nullptr);

  const LexiconSet& lexicons() const noexcept { return *lexicons_; }
  const EmbeddingBackend* embeddings() const noexcept { return embeddings_.get(); }

  void set_hedge_detector(std::shared_ptr<const HedgeDetector> d) { hedges_ = std::move(d); }
  void set_question_detector(std::shared_ptr<const QuestionDetector> d) { questions_ = std::move(d); }

  double hedge_density(const TokenizedText& t) const;
  double politeness(const TokenizedText& t) const;
  double sentiment(const TokenizedText& t) const;
  double paper_similarity(const TokenizedText& review, const TokenizedText& paper) const;
  QuestionStats questions(const TokenizedText& t) const;

  /// Throws EmptyText when the review has no tokens. A paper context with no
  /// tokens yields paper_similarity = 0.
  StructuredMetrics compute(std::string_view review, std::string_view paper_title_abstract) const;

 private:
  std::shared_ptr<const LexiconSet> lexicons_;
  std::shared_ptr<const EmbeddingBackend> embeddings_;
  std::shared_ptr<const HedgeDetector> hedges_;
  std::shared_ptr<const QuestionDetector> questions_;
};

}  // namespace peerlens::text
