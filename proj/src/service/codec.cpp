#include "peerlens/service/codec.hpp"

#include "peerlens/judge/rubric.hpp"
#include "peerlens/profile/openalex.hpp"

namespace peerlens::service {
namespace {

using nlohmann::json;

std::string string_field(const json& body, const char* name) {
  const auto it = body.find(name);
  if (it == body.end() || it->is_null()) return {};
  if (!it->is_string()) throw RequestError(422, "invalid_field", std::string("'") + name + "' must be a string");
  return it->get<std::string>();
}

std::optional<bool> bool_field(const json& body, const char* name) {
  const auto it = body.find(name);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_boolean()) throw RequestError(422, "invalid_field", std::string("'") + name + "' must be a boolean");
  return it->get<bool>();
}

}  // namespace

ReviewInput parse_review_input(const json& body) {
  if (!body.is_object()) throw RequestError(400, "invalid_request", "request body must be a JSON object");
  ReviewInput in;
  in.title = string_field(body, "title");
  in.abstract = string_field(body, "abstract");
  in.review_text = string_field(body, "review_text");
  const std::string raw_id = string_field(body, "reviewer_openalex_id");
  if (!raw_id.empty()) {
    auto id = profile::normalize_author_id(raw_id);
    if (!id) throw RequestError(422, "invalid_reviewer_id", "reviewer_openalex_id is not an OpenAlex author ID");
    in.reviewer_openalex_id = std::move(*id);
  }
  in.include_llm = bool_field(body, "include_llm").value_or(true);
  in.include_profile = bool_field(body, "include_profile");
  in.require_estimate = bool_field(body, "require_estimate").value_or(false);
  const std::string id = string_field(body, "id");
  if (!id.empty()) in.id = id;
  return in;
}

bool has_annotations(const json& record) {
  return record.is_object() && (record.contains("human_aspects") || record.contains("human_overall"));
}

AnnotatedReview parse_annotated_review(const json& record) {
  AnnotatedReview out;
  out.input = parse_review_input(record);
  const auto aspects = record.find("human_aspects");
  if (aspects == record.end() || !aspects->is_object()) {
    throw RequestError(422, "invalid_annotation", "'human_aspects' must be an object");
  }
  for (auto key : judge::kAspectKeys) {
    const auto it = aspects->find(std::string(key));
    if (it == aspects->end() || !it->is_number_integer()) {
      throw RequestError(422, "invalid_annotation", "human_aspects." + std::string(key) + " must be an integer");
    }
    const int v = it->get<int>();
    if (v < 1 || v > 5) {
      throw RequestError(422, "invalid_annotation", "human_aspects." + std::string(key) + " must be in 1..5");
    }
    out.human_aspects[std::string(key)] = v;
  }
  const auto overall = record.find("human_overall");
  if (overall == record.end() || !overall->is_number()) {
    throw RequestError(422, "invalid_annotation", "'human_overall' must be a number");
  }
  out.human_overall = overall->get<double>();
  if (!(out.human_overall >= 1.0 && out.human_overall <= 5.0)) {
    throw RequestError(422, "invalid_annotation", "'human_overall' must be in [1, 5]");
  }
  return out;
}

}  // namespace peerlens::service
