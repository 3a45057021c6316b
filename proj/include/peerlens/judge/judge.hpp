#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "peerlens/judge/backend.hpp"
#include "peerlens/judge/rubric.hpp"
#include "peerlens/review.hpp"

namespace peerlens::judge {

struct RubricScores {
  std::map<std::string, int> scores;  // aspect key -> 1..5
  std::map<std::string, std::string> rationales;
  std::string backend_id;
  std::string prompt_version;
  int attempts = 0;

  bool operator==(const RubricScores&) const = default;
};

/// Deterministic judge prompt. Aspects are emitted in canonical key order
/// whatever order `aspects` has. Throws EmptyText for an empty review.
std::vector<ChatMessage> build_prompt(const ReviewInput& review, const std::vector<RubricAspect>& aspects,
                                      std::string_view prompt_version);

/// The first balanced {...} in `reply`, respecting JSON string escapes.
std::optional<std::string_view> extract_json_object(std::string_view reply);

/// Parses and validates a reply. Throws MalformedJudgment or ScoreOutOfRange.
RubricScores parse_judgment(std::string_view reply);

struct JudgeOptions {
  int max_retries = 2;  // re-prompts after the first attempt
};

/// Sends the prompt, validates the reply and re-prompts with a correction
/// on validation failure. Every returned score came from a validated reply.
RubricScores judge(const ReviewInput& review, const JudgeBackend& backend, const Rubric& rubric = Rubric::bundled(),
                   const JudgeOptions& options = {});

}  // namespace peerlens::judge
