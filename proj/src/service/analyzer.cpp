#include "peerlens/service/analyzer.hpp"

#include <atomic>
#include <thread>
#include <vector>

#include "peerlens/estimator/features.hpp"
#include "peerlens/text/tokenizer.hpp"
#include "peerlens/version.hpp"

namespace peerlens::service {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

SectionError section_error(const Error& e) {
  SectionError s{std::string(code_name(e.code())), e.what(), std::nullopt};
  if (const auto* http = dynamic_cast<const HttpError*>(&e); http != nullptr && http->status() > 0) {
    s.upstream_status = http->status();
  }
  return s;
}

void validate(const ReviewInput& in, const Limits& limits) {
  if (in.review_text.size() > limits.max_review_bytes) {
    throw RequestError(413, "review_too_large",
                       "review_text exceeds " + std::to_string(limits.max_review_bytes) + " bytes");
  }
  if (text::tokenize(in.review_text).empty()) throw RequestError(422, "empty_review", "review_text has no words");
  if (in.title.empty() && in.abstract.empty()) {
    throw RequestError(422, "empty_paper_context", "title and abstract are both empty");
  }
  if (in.include_profile.value_or(false) && !in.reviewer_openalex_id) {
    throw RequestError(422, "missing_reviewer_id", "include_profile requires reviewer_openalex_id");
  }
}

}  // namespace

json error_json(const RequestError& e) {
  json body = {{"code", e.code()}, {"message", e.what()}, {"status", e.status()}};
  if (e.upstream_status()) body["upstream_status"] = *e.upstream_status();
  return {{"error", body}};
}

QualityReport Analyzer::analyze(const ReviewInput& in) const {
  const auto total_start = Clock::now();
  validate(in, engine_.limits);
  const auto model = engine_.model->get();
  if (in.require_estimate && !model) {
    throw RequestError(503, "model_not_loaded", "an overall estimate was required but no model is loaded");
  }

  QualityReport r;
  r.id = in.id;
  r.engine_version = std::string(kEngineVersion);
  r.schema_version = std::string(kReportSchemaVersion);
  r.lexicon_hash = engine_.metrics->lexicons().hash;
  r.prompt_version = engine_.rubric->version();

  auto start = Clock::now();
  try {
    r.structured = engine_.metrics->compute(in.review_text, in.paper_text());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEmptyText) throw RequestError(422, "empty_review", e.what());
    throw RequestError(422, "metrics_failed", e.what());
  }
  r.timings_ms["structured"] = ms_since(start);

  if (in.include_llm) {
    start = Clock::now();
    if (!engine_.judge) {
      r.rubric = SectionError{"backend_unavailable", "no judge backend is configured", std::nullopt};
    } else {
      try {
        r.rubric = judge::judge(in, *engine_.judge, *engine_.rubric, judge::JudgeOptions{engine_.limits.judge_retries});
      } catch (const Error& e) {
        r.rubric = section_error(e);
      }
    }
    r.degraded = r.degraded || std::holds_alternative<SectionError>(r.rubric);
    r.timings_ms["rubric"] = ms_since(start);
  }

  if (in.wants_profile() && in.reviewer_openalex_id) {
    start = Clock::now();
    if (!engine_.authors) {
      r.profile = SectionError{"backend_unavailable", "no OpenAlex source is configured", std::nullopt};
    } else {
      try {
        r.profile = profile::derive_profile(engine_.authors->fetch(*in.reviewer_openalex_id), in.paper_text(),
                                            *engine_.metrics, engine_.now());
      } catch (const Error& e) {
        r.profile = section_error(e);
      }
    }
    r.degraded = r.degraded || std::holds_alternative<SectionError>(r.profile);
    r.timings_ms["profile"] = ms_since(start);
  }

  if (model) {
    start = Clock::now();
    if (const auto* rubric = std::get_if<judge::RubricScores>(&r.rubric)) {
      std::optional<profile::ReviewerProfile> prof;
      if (const auto* p = std::get_if<profile::ReviewerProfile>(&r.profile)) prof = *p;
      try {
        r.overall_estimate = estimator::predict(*model, estimator::assemble_features(r.structured, *rubric, prof));
      } catch (const Error& e) {
        r.estimate_error = section_error(e);
        r.degraded = true;
      }
    } else {
      r.estimate_error = SectionError{"missing_features", "the estimate needs rubric scores", std::nullopt};
    }
    r.timings_ms["estimate"] = ms_since(start);
  }
  r.timings_ms["total"] = ms_since(total_start);
  return r;
}

json Analyzer::analyze_batch(const json& body, const JsonOptions& options) const {
  if (!body.is_array()) throw RequestError(400, "invalid_batch", "batch body must be a JSON array");
  if (body.empty()) throw RequestError(400, "invalid_batch", "batch must contain at least one item");
  if (body.size() > engine_.limits.max_batch) {
    throw RequestError(400, "batch_too_large",
                       "batch holds " + std::to_string(body.size()) + " items; the limit is " +
                           std::to_string(engine_.limits.max_batch));
  }
  std::vector<json> out(body.size());
  auto run = [&](std::size_t i) {
    try {
      out[i] = to_json(analyze(parse_review_input(body[i])), options);
    } catch (const RequestError& e) {
      out[i] = error_json(e);
    } catch (const std::exception& e) {
      out[i] = error_json(RequestError(500, "internal_error", e.what()));
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max<std::size_t>(engine_.limits.batch_concurrency, 1), body.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < out.size();) run(i);
    });
  }
  for (std::size_t i; (i = next.fetch_add(1)) < out.size();) run(i);
  pool.clear();
  return json(std::move(out));
}

profile::ReviewerProfile Analyzer::reviewer(const std::string& raw_id, const std::string& submission_text) const {
  const auto id = profile::normalize_author_id(raw_id);
  if (!id) throw RequestError(422, "invalid_reviewer_id", "'" + raw_id + "' is not an OpenAlex author ID");
  if (!engine_.authors) throw RequestError(503, "backend_unavailable", "no OpenAlex source is configured");
  try {
    return profile::derive_profile(engine_.authors->fetch(*id), submission_text, *engine_.metrics, engine_.now());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotFound) throw RequestError(404, "not_found", "unknown author " + *id);
    const auto s = section_error(e);
    throw RequestError(502, s.code, e.what(), s.upstream_status);
  }
}

}  // namespace peerlens::service
