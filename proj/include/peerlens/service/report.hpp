#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "peerlens/judge/judge.hpp"
#include "peerlens/profile/profile.hpp"
#include "peerlens/text/metrics.hpp"

namespace peerlens::service {

/// Replaces a report section whose stage failed.
struct SectionError {
  std::string code;
  std::string message;
  std::optional<int> upstream_status;

  bool operator==(const SectionError&) const = default;
  nlohmann::json to_json() const;
};

/// monostate: not requested (serialized as null).
template <typename T>
using Section = std::variant<std::monostate, T, SectionError>;

struct QualityReport {
  std::optional<std::string> id;
  text::StructuredMetrics structured;
  Section<judge::RubricScores> rubric;
  Section<profile::ReviewerProfile> profile;
  std::optional<double> overall_estimate;
  /// Why no estimate was produced although a model is loaded.
  std::optional<SectionError> estimate_error;
  bool degraded = false;
  std::string engine_version;
  std::string schema_version;
  std::string lexicon_hash;
  std::string prompt_version;
  std::map<std::string, double> timings_ms;
};

struct JsonOptions {
  bool include_timings = true;
  /// Drops volatile fields (timings, profile fetched_at) for byte comparisons.
  bool canonical = false;
};

nlohmann::json to_json(const text::StructuredMetrics& m);
nlohmann::json to_json(const judge::RubricScores& r);
nlohmann::json to_json(const profile::ReviewerProfile& p, const JsonOptions& options = {});
nlohmann::json to_json(const QualityReport& report, const JsonOptions& options = {});

}  // namespace peerlens::service
