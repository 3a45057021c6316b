#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace peerlens::judge {

inline constexpr std::size_t kAspectCount = 13;

/// The thirteen review-quality dimensions, in canonical order.
inline constexpr std::array<std::string_view, kAspectCount> kAspectKeys = {
    "overall_quality", "comprehensiveness", "actionability", "sentiment_polarity", "constructiveness",
    "technical_terms", "objectivity",       "alignment",     "vagueness",          "fairness",
    "politeness",      "clarity_readability", "factuality"};

/// Position of `key` in kAspectKeys, or -1.
int aspect_index(std::string_view key);

struct RubricAspect {
  std::string key;
  std::string name;
  std::string description;
  std::array<std::string, 5> anchors;  // levels 1..5
};

class Rubric {
 public:
  /// Parses the rubric text format:
  ///
  ///   version = rubric-v1
  ///   [aspect_key]
  ///   name = ...
  ///   description = ...
  ///   1 = ...   (through 5)
  ///
  /// Throws Error{kConfigError} unless exactly the thirteen known keys are
  /// present, each with a description and all five anchors.
  static Rubric parse(std::string_view content);
  static const Rubric& bundled();

  const std::string& version() const noexcept { return version_; }
  /// Aspects in canonical key order regardless of file order.
  const std::vector<RubricAspect>& aspects() const noexcept { return aspects_; }

 private:
  std::string version_;
  std::vector<RubricAspect> aspects_;
};

}  // namespace peerlens::judge
