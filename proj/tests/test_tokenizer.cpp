#include <doctest.h>

#include "peerlens/rng.hpp"
#include "peerlens/text/tokenizer.hpp"
#include "support/random_text.hpp"

using peerlens::text::tokenize;
using Strings = std::vector<std::string>;

TEST_CASE("empty input yields no tokens and no sentences") {
  const auto t = tokenize("");
  CHECK(t.tokens.empty());
  CHECK(t.sentences.empty());
  CHECK(t.raw_length_chars == 0);
}

TEST_CASE("single sentence without terminal punctuation") {
  const auto t = tokenize("The cat sat");
  CHECK(t.tokens == Strings{"the", "cat", "sat"});
  CHECK(t.sentences == Strings{"The cat sat"});
}

TEST_CASE("splitter has no abbreviation table") {
  // '.' followed by a space always ends a sentence, so "Eq." closes one.
  const auto t = tokenize("Nice work. Fix Eq. 3?");
  CHECK(t.sentences == Strings{"Nice work.", "Fix Eq.", "3?"});
  CHECK(t.tokens == Strings{"nice", "work", "fix", "eq", "3"});
}

TEST_CASE("terminal punctuation not followed by whitespace does not split") {
  const auto t = tokenize("See Sec.3.2 now! Really?Yes.");
  CHECK(t.sentences == Strings{"See Sec.3.2 now!", "Really?Yes."});
}

TEST_CASE("apostrophes and hyphens are kept only inside words") {
  const auto t = tokenize("don't -well-known- 'quoted' x--y");
  CHECK(t.tokens == Strings{"don't", "well-known", "quoted", "x", "y"});
}

TEST_CASE("unicode punctuation separates, curly apostrophe is normalised") {
  const auto t = tokenize("authors\xE2\x80\x99 work\xE2\x80\x94great \xE2\x80\x9Cquoted\xE2\x80\x9D caf\xC3\xA9");
  CHECK(t.tokens == Strings{"authors", "work", "great", "quoted", "caf\xC3\xA9"});
  CHECK(tokenize("it\xE2\x80\x99s").tokens == Strings{"it's"});
}

TEST_CASE("punctuation-only segments are not sentences") {
  const auto t = tokenize("... ?! Good.");
  CHECK(t.sentences == Strings{"Good."});
  CHECK(tokenize("?? !!").sentences.empty());
}

TEST_CASE("property: sentences non-empty iff tokens non-empty; tokens are clean") {
  peerlens::Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    std::string s;
    const auto len = rng.below(40);
    for (std::uint64_t k = 0; k < len; ++k) {
      static const char alphabet[] = "ab .?!'-\t\nZ9,";
      s.push_back(alphabet[rng.below(sizeof(alphabet) - 1)]);
    }
    const auto t = tokenize(s);
    CHECK(t.sentences.empty() == t.tokens.empty());
    for (const auto& tok : t.tokens) {
      REQUIRE_FALSE(tok.empty());
      CHECK(tok.find_first_of(" \t\n") == std::string::npos);
    }
  }
}

TEST_CASE("property: re-tokenizing the space-joined tokens is idempotent") {
  peerlens::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto t = tokenize(peerlens::testing::random_text(rng));
    std::string joined;
    for (const auto& tok : t.tokens) joined += tok + " ";
    CHECK(tokenize(joined).tokens == t.tokens);
  }
}
