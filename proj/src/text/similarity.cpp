#include "peerlens/text/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "../http_util.hpp"
#include "peerlens/error.hpp"

namespace peerlens::text {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kBackendError, "embedding dimensions differ");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

namespace {

std::map<std::string_view, long long> term_frequencies(const TokenizedText& t, const Lexicon& stopwords) {
  std::map<std::string_view, long long> tf;
  for (const auto& tok : t.tokens) {
    if (!stopwords.contains(tok)) ++tf[tok];
  }
  return tf;
}

std::string joined_sentences(const TokenizedText& t) {
  std::string out;
  for (const auto& s : t.sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

}  // namespace

double lexical_similarity(const TokenizedText& a, const TokenizedText& b, const Lexicon& stopwords) {
  const auto ta = term_frequencies(a, stopwords);
  const auto tb = term_frequencies(b, stopwords);
  if (ta.empty() || tb.empty()) return 0.0;
  // Integer arithmetic keeps identical documents at exactly 1.0.
  long long dot = 0, na = 0, nb = 0;
  for (const auto& [term, count] : ta) {
    na += count * count;
    if (auto it = tb.find(term); it != tb.end()) dot += count * it->second;
  }
  for (const auto& [term, count] : tb) nb += count * count;
  const double sim = static_cast<double>(dot) /
                     std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::clamp(sim, 0.0, 1.0);
}

double paper_similarity(const TokenizedText& review, const TokenizedText& paper, const Lexicon& stopwords,
                        const EmbeddingBackend* backend) {
  if (review.empty() || paper.empty()) {
    throw Error(ErrorCode::kEmptyText, "similarity needs two non-empty texts");
  }
  if (backend == nullptr) return lexical_similarity(review, paper, stopwords);
  const double c = cosine(backend->embed(joined_sentences(review)), backend->embed(joined_sentences(paper)));
  return std::clamp((c + 1.0) / 2.0, 0.0, 1.0);
}

HttpEmbeddingBackend::HttpEmbeddingBackend(Config config) : config_(std::move(config)) {}

std::vector<double> HttpEmbeddingBackend::embed(std::string_view text) const {
  const auto url = detail::split_url(config_.base_url);
  auto client = detail::make_client(url.origin, config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  const nlohmann::json body = {{"model", config_.model}, {"input", std::string(text)}};
  auto res = client->Post(url.path_prefix + "/v1/embeddings", headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kBackendError, "embedding request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kBackendError, "embedding backend returned HTTP " + std::to_string(res->status));
  }
  try {
    const auto doc = nlohmann::json::parse(res->body);
    return doc.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBackendError, std::string("malformed embedding response: ") + e.what());
  }
}

}  // namespace peerlens::text
