#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "peerlens/profile/openalex.hpp"
#include "peerlens/text/metrics.hpp"

namespace peerlens::profile {

struct ReviewerProfile {
  std::string openalex_id;
  long long citation_count = 0;
  int tenure_years = 0;
  /// Absent when no submission text was supplied.
  std::optional<double> topical_alignment;
  std::size_t works_sampled = 0;
  std::string fetched_at;  // ISO-8601 UTC

  bool operator==(const ReviewerProfile&) const = default;
};

inline constexpr std::size_t kAlignmentTopK = 5;

/// Pure derivation of reviewer metrics from already-fetched data.
///
/// tenure_years = current year - earliest publication year (0 without dated
/// works, never negative). topical_alignment is the mean of the top five
/// similarities between the submission and each work's title + abstract,
/// 0 if no work has text, and absent when `submission_text` is empty.
ReviewerProfile derive_profile(const AuthorRecord& author, std::string_view submission_text,
                               const text::TextMetrics& metrics,
                               std::chrono::system_clock::time_point now);

int calendar_year(std::chrono::system_clock::time_point t);
std::string iso8601_utc(std::chrono::system_clock::time_point t);

}  // namespace peerlens::profile
