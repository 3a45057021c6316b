#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace peerlens::text {

struct TokenizedText {
  std::vector<std::string> tokens;     // lowercased word tokens
  std::vector<std::string> sentences;  // trimmed, in order; only those containing a token
  std::size_t raw_length_chars = 0;

  bool empty() const noexcept { return tokens.empty(); }
};

/// Splits text into sentences and word tokens.
///
/// Sentences end at '.', '!' or '?' when followed by whitespace or end of text;
/// there is no abbreviation table, so "Eq. 3" splits after "Eq.". Segments
/// without any word token are dropped, which keeps `sentences` empty exactly
/// when `tokens` is.
///
/// A word token is a maximal run of ASCII alphanumerics or non-ASCII letters,
/// with apostrophes and hyphens kept only between two word characters.
/// Unicode punctuation (U+00A0..U+00BF, U+2000..U+206F) separates words,
/// except U+2019 between letters, which is normalised to an ASCII apostrophe.
TokenizedText tokenize(std::string_view text);

}  // namespace peerlens::text
