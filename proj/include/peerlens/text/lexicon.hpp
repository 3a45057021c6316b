#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace peerlens::text {

/// A set of lowercased terms, each one to three tokens long.
class Lexicon {
 public:
  static constexpr std::size_t kMaxNgram = 3;

  Lexicon() = default;

  /// Parses the line format: one term per line, '#' starts a comment,
  /// surrounding whitespace ignored. Terms are tokenized and lowercased so
  /// "Thank  You" and "thank you" are the same entry.
  static Lexicon parse(std::string_view content);

  bool contains(std::string_view term) const { return terms_.contains(std::string(term)); }
  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t max_ngram() const noexcept { return max_ngram_; }

  /// Number of lexicon hits in `tokens`, scanning left to right and taking the
  /// longest entry that starts at each position; matched tokens are consumed.
  std::size_t count_matches(std::span<const std::string> tokens) const;

 private:
  std::unordered_set<std::string> terms_;
  std::size_t max_ngram_ = 0;
};

/// All word lists the text metrics depend on, plus a fingerprint of their
/// source text so reports can record exactly which lists produced a score.
struct LexiconSet {
  Lexicon hedges;
  Lexicon polite;
  Lexicon impolite;
  Lexicon positive;
  Lexicon negative;
  Lexicon stopwords;
  std::string hash;  // 16 hex digits

  static const std::vector<std::string_view>& file_names();

  /// The lists compiled into the binary from data/lexicons.
  static const LexiconSet& bundled();

  /// Loads every list from `dir`; any file missing there falls back to the
  /// bundled copy.
  static LexiconSet load(const std::filesystem::path& dir);
};

}  // namespace peerlens::text
