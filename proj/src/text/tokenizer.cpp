#include "peerlens/text/tokenizer.hpp"

#include <cstdint>

namespace peerlens::text {
namespace {

enum class Kind { kWord, kJoiner, kSeparator };

struct Unit {
  Kind kind;
  std::size_t begin;
  std::size_t length;
  char joiner;  // normalised joiner character for kJoiner
};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Decodes one UTF-8 sequence at `pos`. Invalid sequences are reported as a
// single byte with code point 0xFFFD, which counts as a word character.
std::pair<std::uint32_t, std::size_t> decode(std::string_view s, std::size_t pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  std::uint32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto c = static_cast<unsigned char>(s[pos + i]);
    if ((c & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (c & 0x3F);
  }
  return {cp, len};
}

Unit classify(std::string_view s, std::size_t pos) {
  const auto c = static_cast<unsigned char>(s[pos]);
  if (c < 0x80) {
    if (is_ascii_alnum(c)) return {Kind::kWord, pos, 1, 0};
    if (c == '\'' || c == '-') return {Kind::kJoiner, pos, 1, static_cast<char>(c)};
    return {Kind::kSeparator, pos, 1, 0};
  }
  const auto [cp, len] = decode(s, pos);
  if (cp == 0x2019) return {Kind::kJoiner, pos, len, '\''};
  if ((cp >= 0x00A0 && cp <= 0x00BF) || (cp >= 0x2000 && cp <= 0x206F)) {
    return {Kind::kSeparator, pos, len, 0};
  }
  return {Kind::kWord, pos, len, 0};
}

void append_lower(std::string& out, std::string_view bytes) {
  for (char ch : bytes) {
    out.push_back((ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a') : ch);
  }
}

std::size_t append_word_tokens(std::string_view s, std::vector<std::string>& out) {
  std::vector<Unit> units;
  for (std::size_t pos = 0; pos < s.size();) {
    units.push_back(classify(s, pos));
    pos += units.back().length;
  }
  const std::size_t before = out.size();
  std::string current;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const Unit& u = units[i];
    if (u.kind == Kind::kWord) {
      append_lower(current, s.substr(u.begin, u.length));
      continue;
    }
    const bool joins = u.kind == Kind::kJoiner && !current.empty() && i + 1 < units.size() &&
                       units[i + 1].kind == Kind::kWord;
    if (joins) {
      current.push_back(u.joiner);
      continue;
    }
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out.size() - before;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

}  // namespace

TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  out.raw_length_chars = text.size();

  auto flush = [&](std::size_t begin, std::size_t end) {
    const std::string_view segment = trim(text.substr(begin, end - begin));
    if (segment.empty()) return;
    if (append_word_tokens(segment, out.tokens) > 0) out.sentences.emplace_back(segment);
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (i + 1 == text.size() || is_space(text[i + 1])) {
      flush(start, i + 1);
      start = i + 1;
    }
  }
  if (start < text.size()) flush(start, text.size());
  return out;
}

}  // namespace peerlens::text
