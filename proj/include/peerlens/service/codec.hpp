#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "peerlens/review.hpp"

namespace peerlens::service {

/// Field-level request validation failure, reported as 422 (or 400 for a
/// non-object body) with a stable machine-readable code.
class RequestError : public std::runtime_error {
 public:
  RequestError(int status, std::string code, const std::string& message,
               std::optional<int> upstream_status = std::nullopt)
      : std::runtime_error(message), status_(status), code_(std::move(code)), upstream_status_(upstream_status) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }
  std::optional<int> upstream_status() const noexcept { return upstream_status_; }

 private:
  int status_;
  std::string code_;
  std::optional<int> upstream_status_;
};

/// Parses a ReviewInput body. Unknown members are ignored so that corpus
/// records (which carry annotations) parse too. Reviewer IDs are normalized.
/// Throws RequestError: 400 "invalid_request" for a non-object,
/// 422 "invalid_field" for wrong member types, 422 "invalid_reviewer_id".
ReviewInput parse_review_input(const nlohmann::json& body);

/// A corpus record with human annotations.
struct AnnotatedReview {
  ReviewInput input;
  std::map<std::string, int> human_aspects;  // all 13 aspect keys, 1..5
  double human_overall = 0.0;                // [1, 5]
};

/// Throws RequestError "invalid_annotation" when annotations are missing or
/// out of range.
AnnotatedReview parse_annotated_review(const nlohmann::json& record);

/// True when the record carries annotation members at all.
bool has_annotations(const nlohmann::json& record);

}  // namespace peerlens::service
