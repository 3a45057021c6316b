#include "peerlens/service/report.hpp"

namespace peerlens::service {
namespace {

using nlohmann::json;

template <typename T, typename F>
json section_json(const Section<T>& s, F&& encode) {
  if (std::holds_alternative<std::monostate>(s)) return nullptr;
  if (const auto* err = std::get_if<SectionError>(&s)) return err->to_json();
  return encode(std::get<T>(s));
}

}  // namespace

json SectionError::to_json() const {
  json e = {{"code", code}, {"message", message}};
  if (upstream_status) e["upstream_status"] = *upstream_status;
  return {{"error", e}};
}

json to_json(const text::StructuredMetrics& m) {
  return {{"review_length_tokens", m.review_length_tokens},
          {"hedge_density", m.hedge_density},
          {"lexical_diversity", m.lexical_diversity},
          {"readability_fre", m.readability_fre},
          {"politeness", m.politeness},
          {"sentiment", m.sentiment},
          {"paper_similarity", m.paper_similarity},
          {"structure_mentions", m.structure_mentions},
          {"citation_mentions", m.citation_mentions},
          {"question_count", m.question_count},
          {"has_questions", m.has_questions}};
}

json to_json(const judge::RubricScores& r) {
  return {{"scores", r.scores},
          {"rationales", r.rationales},
          {"backend", r.backend_id},
          {"prompt_version", r.prompt_version},
          {"attempts", r.attempts}};
}

json to_json(const profile::ReviewerProfile& p, const JsonOptions& options) {
  json j = {{"openalex_id", p.openalex_id},
            {"citation_count", p.citation_count},
            {"tenure_years", p.tenure_years},
            {"works_sampled", p.works_sampled}};
  j["topical_alignment"] = p.topical_alignment ? json(*p.topical_alignment) : json(nullptr);
  if (!options.canonical) j["fetched_at"] = p.fetched_at;
  return j;
}

json to_json(const QualityReport& r, const JsonOptions& options) {
  json j = json::object();
  if (r.id) j["id"] = *r.id;
  j["schema_version"] = r.schema_version;
  j["engine_version"] = r.engine_version;
  j["lexicon_hash"] = r.lexicon_hash;
  j["prompt_version"] = r.prompt_version;
  j["structured"] = to_json(r.structured);
  j["rubric"] = section_json(r.rubric, [](const judge::RubricScores& s) { return to_json(s); });
  j["profile"] = section_json(r.profile, [&](const profile::ReviewerProfile& p) { return to_json(p, options); });
  j["overall_estimate"] = r.overall_estimate ? json(*r.overall_estimate) : json(nullptr);
  if (r.estimate_error) j["estimate_error"] = r.estimate_error->to_json();
  j["degraded"] = r.degraded;
  if (options.include_timings && !options.canonical) j["timings_ms"] = r.timings_ms;
  return j;
}

}  // namespace peerlens::service
