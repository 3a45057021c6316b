#include "peerlens/estimator/features.hpp"

#include <cmath>

#include "peerlens/error.hpp"
#include "peerlens/version.hpp"

namespace peerlens::estimator {

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {"review_length_tokens", "hedge_density",      "lexical_diversity",
                                  "readability_fre",      "politeness",         "sentiment",
                                  "paper_similarity",     "structure_mentions", "citation_mentions",
                                  "question_count",       "has_questions"};
    for (auto key : judge::kAspectKeys) n.push_back("rubric_" + std::string(key));
    n.insert(n.end(), {"profile_citation_count", "profile_tenure_years", "profile_topical_alignment",
                       "profile_present"});
    return n;
  }();
  return names;
}

FeatureVector assemble_features(const text::StructuredMetrics& m, const judge::RubricScores& rubric,
                                const std::optional<profile::ReviewerProfile>& reviewer) {
  FeatureVector f;
  f.schema_version = std::string(kFeatureSchemaVersion);
  f.values.reserve(kFeatureCount);
  f.values.insert(f.values.end(), {static_cast<double>(m.review_length_tokens), m.hedge_density,
                                   m.lexical_diversity, m.readability_fre, m.politeness, m.sentiment,
                                   m.paper_similarity, static_cast<double>(m.structure_mentions),
                                   static_cast<double>(m.citation_mentions), static_cast<double>(m.question_count),
                                   m.has_questions ? 1.0 : 0.0});
  for (auto key : judge::kAspectKeys) {
    const auto it = rubric.scores.find(std::string(key));
    if (it == rubric.scores.end()) {
      throw Error(ErrorCode::kSchemaMismatch, "rubric scores lack aspect " + std::string(key));
    }
    f.values.push_back(static_cast<double>(it->second));
  }
  if (reviewer) {
    f.values.insert(f.values.end(), {static_cast<double>(reviewer->citation_count),
                                     static_cast<double>(reviewer->tenure_years),
                                     reviewer->topical_alignment.value_or(0.0), 1.0});
  } else {
    f.values.insert(f.values.end(), {0.0, 0.0, 0.0, 0.0});
  }
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (!std::isfinite(f.values[i])) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite feature " + feature_names()[i]);
    }
  }
  return f;
}

judge::RubricScores rubric_from_annotations(const std::map<std::string, int>& aspects) {
  judge::RubricScores r;
  r.backend_id = "human";
  r.prompt_version = "human-annotation";
  for (auto key : judge::kAspectKeys) {
    const auto it = aspects.find(std::string(key));
    if (it == aspects.end()) {
      throw Error(ErrorCode::kSchemaMismatch, "annotation lacks aspect " + std::string(key));
    }
    r.scores[it->first] = it->second;
    r.rationales[it->first] = "";
  }
  return r;
}

}  // namespace peerlens::estimator
