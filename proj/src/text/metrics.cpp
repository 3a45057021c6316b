#include "peerlens/text/metrics.hpp"

#include <regex>

#include "peerlens/error.hpp"

namespace peerlens::text {
namespace {

void require_tokens(const TokenizedText& t) {
  if (t.empty()) throw Error(ErrorCode::kEmptyText, "text contains no word tokens");
}

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
    case 'A': case 'E': case 'I': case 'O': case 'U': case 'Y':
      return true;
    default:
      return false;
  }
}

char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::size_t count_regex(std::string_view text, const std::regex& re) {
  using It = std::regex_iterator<std::string_view::const_iterator>;
  return static_cast<std::size_t>(std::distance(It(text.begin(), text.end(), re), It()));
}

const std::regex& structure_regex() {
  static const std::regex re(
      R"((?:\b(?:figures?|figs?\.?|tables?|sections?|secs?\.?|equations?|eqs?\.?|algorithms?|lines?|pages?)|§)\s*\d+(?:\.\d+)*[a-z]?\b)"
      R"(|\bappendix\s*(?:\d+(?:\.\d+)*[a-z]?|[a-z](?:\.\d+)*)\b)",
      std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
  return re;
}

const std::regex& citation_regex() {
  // Alternation order matters: at a given position the parenthetical form
  // wins, so "(Smith et al., 2020)" is one mention, not two.
  static const std::regex re(
      R"(\[\s*\d+(?:\s*[,;-]\s*\d+)*\s*\])"
      R"(|\(\s*[a-z][a-z'-]*(?:\s+(?:et\s+al\.?|and|&)(?:\s+[a-z][a-z'-]*)?)?\s*,?\s*(?:1[5-9]|20)\d\d[a-z]?\s*\))"
      R"(|\bet\s+al\.)"
      R"(|\barxiv:\s*[0-9a-z][0-9a-z./-]*)"
      R"(|\bdoi\b)",
      std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
  return re;
}

}  // namespace

double lexical_diversity(const TokenizedText& t) {
  require_tokens(t);
  std::unordered_set<std::string_view> unique(t.tokens.begin(), t.tokens.end());
  return static_cast<double>(unique.size()) / static_cast<double>(t.tokens.size());
}

int syllable_count(std::string_view word) {
  int groups = 0;
  bool in_group = false;
  for (char c : word) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = word.size();
  if (n >= 1 && lower(word[n - 1]) == 'e' && !(n >= 2 && lower(word[n - 2]) == 'l')) --groups;
  return groups < 1 ? 1 : groups;
}

double readability_fre(const TokenizedText& t) {
  require_tokens(t);
  long long syllables = 0;
  for (const auto& w : t.tokens) syllables += syllable_count(w);
  const double words = static_cast<double>(t.tokens.size());
  const double sentences = static_cast<double>(t.sentences.size());
  return 206.835 - 1.015 * (words / sentences) - 84.6 * (static_cast<double>(syllables) / words);
}

std::size_t structure_mentions(std::string_view text) { return count_regex(text, structure_regex()); }

std::size_t citation_mentions(std::string_view text) { return count_regex(text, citation_regex()); }

QuestionStats detect_questions(const TokenizedText& t) {
  QuestionStats q;
  for (const auto& s : t.sentences) {
    if (!s.empty() && s.back() == '?') ++q.count;
  }
  q.present = q.count > 0;
  return q;
}

double polarity_score(std::size_t positive_hits, std::size_t negative_hits) {
  const double p = static_cast<double>(positive_hits);
  const double n = static_cast<double>(negative_hits);
  return (p - n) / std::max(1.0, p + n);
}

double LexiconHedgeDetector::density(const TokenizedText& t) const {
  require_tokens(t);
  std::size_t hits = 0;
  for (const auto& tok : t.tokens) hits += cues_.contains(tok) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(t.tokens.size());
}

TextMetrics::TextMetrics(std::shared_ptr<const LexiconSet> lexicons,
                         std::shared_ptr<const EmbeddingBackend> embeddings)
    : lexicons_(lexicons ? std::move(lexicons)
                         : std::shared_ptr<const LexiconSet>(&LexiconSet::bundled(), [](const LexiconSet*) {})),
      embeddings_(std::move(embeddings)) {
  hedges_ = std::make_shared<LexiconHedgeDetector>(lexicons_->hedges);
  questions_ = std::make_shared<TerminalMarkQuestionDetector>();
}

double TextMetrics::hedge_density(const TokenizedText& t) const { return hedges_->density(t); }

double TextMetrics::politeness(const TokenizedText& t) const {
  require_tokens(t);
  return polarity_score(lexicons_->polite.count_matches(t.tokens), lexicons_->impolite.count_matches(t.tokens));
}

double TextMetrics::sentiment(const TokenizedText& t) const {
  require_tokens(t);
  return polarity_score(lexicons_->positive.count_matches(t.tokens), lexicons_->negative.count_matches(t.tokens));
}

double TextMetrics::paper_similarity(const TokenizedText& review, const TokenizedText& paper) const {
  return text::paper_similarity(review, paper, lexicons_->stopwords, embeddings_.get());
}

QuestionStats TextMetrics::questions(const TokenizedText& t) const { return questions_->detect(t); }

StructuredMetrics TextMetrics::compute(std::string_view review, std::string_view paper_title_abstract) const {
  const TokenizedText r = tokenize(review);
  require_tokens(r);
  const TokenizedText p = tokenize(paper_title_abstract);

  StructuredMetrics m;
  m.review_length_tokens = r.tokens.size();
  m.hedge_density = hedge_density(r);
  m.lexical_diversity = lexical_diversity(r);
  m.readability_fre = readability_fre(r);
  m.politeness = politeness(r);
  m.sentiment = sentiment(r);
  m.paper_similarity = p.empty() ? 0.0 : paper_similarity(r, p);
  m.structure_mentions = structure_mentions(review);
  m.citation_mentions = citation_mentions(review);
  const QuestionStats q = questions(r);
  m.question_count = q.count;
  m.has_questions = q.present;
  return m;
}

}  // namespace peerlens::text
