#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peerlens/judge/judge.hpp"
#include "peerlens/profile/profile.hpp"
#include "peerlens/text/metrics.hpp"

namespace peerlens::estimator {

inline constexpr std::size_t kStructuredFeatureCount = 11;
inline constexpr std::size_t kRubricFeatureCount = judge::kAspectCount;
inline constexpr std::size_t kProfileFeatureCount = 3;
/// 11 structured + 13 rubric + 3 profile + 1 profile-presence flag.
inline constexpr std::size_t kFeatureCount =
    kStructuredFeatureCount + kRubricFeatureCount + kProfileFeatureCount + 1;

/// Feature names in vector order. Layout:
///   [0, 11)  structured metrics (review_length_tokens ... has_questions)
///   [11, 24) rubric_<aspect> in canonical aspect order
///   [24, 27) profile_citation_count, profile_tenure_years, profile_topical_alignment
///   27       profile_present (1 when a reviewer profile was available)
const std::vector<std::string>& feature_names();

struct FeatureVector {
  std::vector<double> values;
  std::string schema_version;

  bool operator==(const FeatureVector&) const = default;
};

/// Throws SchemaMismatch when `rubric` lacks an aspect, InvalidArgument on
/// non-finite inputs. An absent profile zero-fills its slots and the flag.
FeatureVector assemble_features(const text::StructuredMetrics& structured, const judge::RubricScores& rubric,
                                const std::optional<profile::ReviewerProfile>& reviewer);

/// Rubric scores built from human aspect annotations, for training without a
/// judge backend.
judge::RubricScores rubric_from_annotations(const std::map<std::string, int>& aspects);

}  // namespace peerlens::estimator
