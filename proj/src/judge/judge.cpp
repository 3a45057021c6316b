#include "peerlens/judge/judge.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "peerlens/error.hpp"
#include "peerlens/text/tokenizer.hpp"

namespace peerlens::judge {

using nlohmann::json;

namespace {

constexpr std::string_view kSystemPrompt =
    "You are an experienced meta-reviewer who assesses the quality of peer reviews written for "
    "scientific papers. Judge the review, not the paper. Score every dimension strictly by its "
    "rubric, using only integers from 1 to 5. Reply with a single JSON object and nothing else.";

constexpr std::string_view kOutputInstruction =
    "## Output format\n"
    "Reply with one JSON object that has an entry for every dimension listed above, keyed by the "
    "dimension key shown after \"###\". Each entry must be an object of the form "
    "{\"score\": <integer 1-5>, \"rationale\": \"<one sentence>\"}. Do not add any other text.";

}  // namespace

std::vector<ChatMessage> build_prompt(const ReviewInput& review, const std::vector<RubricAspect>& aspects,
                                      std::string_view prompt_version) {
  if (text::tokenize(review.review_text).empty()) {
    throw Error(ErrorCode::kEmptyText, "review text is empty");
  }
  std::vector<const RubricAspect*> ordered;
  for (const auto& a : aspects) ordered.push_back(&a);
  std::sort(ordered.begin(), ordered.end(), [](const RubricAspect* a, const RubricAspect* b) {
    return aspect_index(a->key) < aspect_index(b->key);
  });

  std::string user;
  user += "Prompt version: ";
  user += prompt_version;
  user += "\n\n## Paper title\n" + review.title;
  user += "\n\n## Paper abstract\n" + review.abstract;
  user += "\n\n## Review\n" + review.review_text;
  user += "\n\n## Dimensions\n";
  for (const auto* a : ordered) {
    user += "\n### " + a->key + "\n";
    user += a->name + ": " + a->description + "\n";
    for (std::size_t level = 0; level < a->anchors.size(); ++level) {
      user += std::to_string(level + 1) + " = " + a->anchors[level] + "\n";
    }
  }
  user += "\n";
  user += kOutputInstruction;

  return {{"system", std::string(kSystemPrompt)}, {"user", std::move(user)}};
}

std::optional<std::string_view> extract_json_object(std::string_view reply) {
  const auto start = reply.find('{');
  if (start == std::string_view::npos) return std::nullopt;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < reply.size(); ++i) {
    const char c = reply[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return reply.substr(start, i - start + 1);
  }
  return std::nullopt;
}

RubricScores parse_judgment(std::string_view reply) {
  const auto object = extract_json_object(reply);
  if (!object) throw Error(ErrorCode::kMalformedJudgment, "reply contains no JSON object");
  json doc;
  try {
    doc = json::parse(*object);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJudgment, std::string("reply is not valid JSON: ") + e.what());
  }

  RubricScores out;
  for (auto key_view : kAspectKeys) {
    const std::string key(key_view);
    const auto it = doc.find(key);
    if (it == doc.end()) throw Error(ErrorCode::kMalformedJudgment, "missing dimension " + key);
    const json* score = &*it;
    std::string rationale;
    if (it->is_object()) {
      const auto s = it->find("score");
      if (s == it->end()) throw Error(ErrorCode::kMalformedJudgment, key + " has no score");
      score = &*s;
      if (const auto r = it->find("rationale"); r != it->end() && r->is_string()) rationale = r->get<std::string>();
    }
    if (!score->is_number_integer()) {
      throw Error(ErrorCode::kMalformedJudgment, key + " score is not an integer");
    }
    const auto value = score->get<long long>();
    if (value < 1 || value > 5) {
      throw Error(ErrorCode::kScoreOutOfRange, key + " score " + std::to_string(value) + " is outside 1..5");
    }
    out.scores[key] = static_cast<int>(value);
    out.rationales[key] = std::move(rationale);
  }
  return out;
}

RubricScores judge(const ReviewInput& review, const JudgeBackend& backend, const Rubric& rubric,
                   const JudgeOptions& options) {
  auto messages = build_prompt(review, rubric.aspects(), rubric.version());
  const int attempts = 1 + std::max(0, options.max_retries);
  for (int attempt = 1;; ++attempt) {
    const std::string reply = backend.complete(messages);
    try {
      RubricScores scores = parse_judgment(reply);
      scores.backend_id = backend.id();
      scores.prompt_version = rubric.version();
      scores.attempts = attempt;
      return scores;
    } catch (const Error& e) {
      if (attempt >= attempts) {
        throw Error(e.code(), "judge gave no valid reply after " + std::to_string(attempts) +
                                  " attempts; last problem: " + e.what());
      }
      messages.push_back({"assistant", reply});
      messages.push_back({"user", std::string("Your previous reply could not be used: ") + e.what() +
                                      ". Reply again with only the JSON object, one entry per dimension key, "
                                      "each with an integer score from 1 to 5 and a one-sentence rationale."});
    }
  }
}

}  // namespace peerlens::judge
