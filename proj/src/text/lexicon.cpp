#include "peerlens/text/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "peerlens/embedded_data.hpp"
#include "peerlens/error.hpp"
#include "peerlens/hash.hpp"
#include "peerlens/text/tokenizer.hpp"

namespace peerlens::text {

Lexicon Lexicon::parse(std::string_view content) {
  Lexicon lex;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string_view::npos) eol = content.size();
    std::string_view line = content.substr(pos, eol - pos);
    pos = eol + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = tokenize(line).tokens;
    if (tokens.empty()) continue;
    if (tokens.size() > kMaxNgram) {
      throw Error(ErrorCode::kConfigError,
                  "lexicon entry longer than " + std::to_string(kMaxNgram) + " tokens: " + std::string(line));
    }
    std::string term = tokens.front();
    for (std::size_t i = 1; i < tokens.size(); ++i) term += ' ' + tokens[i];
    lex.terms_.insert(std::move(term));
    lex.max_ngram_ = std::max(lex.max_ngram_, tokens.size());
  }
  return lex;
}

std::size_t Lexicon::count_matches(std::span<const std::string> tokens) const {
  std::size_t hits = 0;
  std::string key;
  for (std::size_t i = 0; i < tokens.size();) {
    std::size_t matched = 0;
    for (std::size_t n = std::min(max_ngram_, tokens.size() - i); n >= 1; --n) {
      key = tokens[i];
      for (std::size_t k = 1; k < n; ++k) key += ' ' + tokens[i + k];
      if (terms_.contains(key)) {
        matched = n;
        break;
      }
    }
    if (matched > 0) {
      ++hits;
      i += matched;
    } else {
      ++i;
    }
  }
  return hits;
}

const std::vector<std::string_view>& LexiconSet::file_names() {
  static const std::vector<std::string_view> names = {
      "hedges.txt", "polite.txt", "impolite.txt", "positive.txt", "negative.txt", "stopwords.txt"};
  return names;
}

namespace {

LexiconSet build(const std::vector<std::string>& contents) {
  LexiconSet set;
  Lexicon* slots[] = {&set.hedges, &set.polite, &set.impolite, &set.positive, &set.negative, &set.stopwords};
  Fnv1a64 h;
  for (std::size_t i = 0; i < contents.size(); ++i) {
    *slots[i] = Lexicon::parse(contents[i]);
    h.update(LexiconSet::file_names()[i]);
    h.update(std::string_view("\0", 1));
    h.update(contents[i]);
    h.update(std::string_view("\0", 1));
  }
  set.hash = to_hex(h.digest());
  return set;
}

std::string bundled_content(std::string_view name) {
  const auto found = embedded::find("lexicons/" + std::string(name));
  if (!found) throw Error(ErrorCode::kConfigError, "missing bundled lexicon " + std::string(name));
  return std::string(*found);
}

}  // namespace

const LexiconSet& LexiconSet::bundled() {
  static const LexiconSet set = [] {
    std::vector<std::string> contents;
    for (auto name : file_names()) contents.push_back(bundled_content(name));
    return build(contents);
  }();
  return set;
}

LexiconSet LexiconSet::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kConfigError, "lexicon directory not found: " + dir.string());
  }
  std::vector<std::string> contents;
  for (auto name : file_names()) {
    const auto path = dir / std::string(name);
    if (!std::filesystem::exists(path)) {
      contents.push_back(bundled_content(name));
      continue;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIoError, "cannot read lexicon " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    contents.push_back(buf.str());
  }
  return build(contents);
}

}  // namespace peerlens::text
