#pragma once

#include <optional>
#include <string>

namespace peerlens {

/// One review plus the paper context it was written for.
struct ReviewInput {
  std::string title;
  std::string abstract;
  std::string review_text;
  std::optional<std::string> reviewer_openalex_id;
  bool include_llm = true;
  /// Unset means "fetch the profile iff an ID was supplied".
  std::optional<bool> include_profile;
  bool require_estimate = false;
  /// Optional caller-side identifier echoed into the report (corpus record id).
  std::optional<std::string> id;

  std::string paper_text() const {
    if (title.empty()) return abstract;
    if (abstract.empty()) return title;
    return title + "\n" + abstract;
  }

  bool wants_profile() const { return include_profile.value_or(reviewer_openalex_id.has_value()); }
};

}  // namespace peerlens
