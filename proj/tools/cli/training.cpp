#include "training.hpp"

#include <iostream>
#include <sstream>

#include "peerlens/estimator/features.hpp"
#include "peerlens/hash.hpp"
#include "peerlens/service/analyzer.hpp"

namespace peerlens::cli {
namespace {

using nlohmann::json;

constexpr std::size_t kChunkLines = 256;

struct Row {
  std::vector<double> features;
  double target = 0.0;
  std::string skip;      // diagnostic when the record is unusable
  std::string warning;   // record kept, profile dropped
  bool backend_failure = false;
};

std::string describe(const service::SectionError& e) {
  auto s = e.code + ": " + e.message;
  if (e.upstream_status) s += " (upstream status " + std::to_string(*e.upstream_status) + ")";
  return s;
}

Row featurize(const service::Analyzer& analyzer, const std::string& line, bool use_human_rubric) {
  Row row;
  const auto doc = json::parse(line, nullptr, false);
  if (doc.is_discarded()) {
    row.skip = "malformed_json: line is not valid JSON";
    return row;
  }
  try {
    auto record = service::parse_annotated_review(doc);
    record.input.include_llm = !use_human_rubric;
    record.input.require_estimate = false;
    const auto report = analyzer.analyze(record.input);

    judge::RubricScores rubric;
    if (use_human_rubric) {
      rubric = estimator::rubric_from_annotations(record.human_aspects);
    } else if (const auto* e = std::get_if<service::SectionError>(&report.rubric)) {
      row.skip = "rubric " + describe(*e);
      row.backend_failure = true;
      return row;
    } else {
      rubric = std::get<judge::RubricScores>(report.rubric);
    }

    std::optional<profile::ReviewerProfile> prof;
    if (const auto* p = std::get_if<profile::ReviewerProfile>(&report.profile)) prof = *p;
    if (const auto* e = std::get_if<service::SectionError>(&report.profile)) {
      row.warning = "profile " + describe(*e) + "; using an absent profile";
      row.backend_failure = true;
    }
    row.features = estimator::assemble_features(report.structured, rubric, prof).values;
    row.target = record.human_overall;
  } catch (const service::RequestError& e) {
    row.skip = e.code() + ": " + e.what();
  } catch (const Error& e) {
    row.skip = std::string(code_name(e.code())) + ": " + e.what();
  }
  return row;
}

}  // namespace

TrainingSet build_training_set(const std::string& corpus, const BackendOptions& backends, bool use_human_rubric,
                               bool fail_fast, std::ostream& err) {
  std::istringstream no_stdin;
  InputFile input(corpus, no_stdin);
  const service::Analyzer analyzer(make_engine(backends, false));
  if (!use_human_rubric && !analyzer.engine().judge) {
    throw CommandError(kExitConfig, "a judge backend (--judge) is required unless --use-human-rubric is set");
  }

  TrainingSet set;
  Fnv1a64 fingerprint;
  std::vector<std::pair<std::size_t, std::string>> chunk;
  std::vector<Row> rows;

  auto flush = [&] {
    rows.assign(chunk.size(), Row{});
    parallel_indices(chunk.size(), analyzer.engine().limits.batch_concurrency,
                     [&](std::size_t i) { rows[i] = featurize(analyzer, chunk[i].second, use_human_rubric); });
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      const auto& r = rows[i];
      if (fail_fast && r.backend_failure) {
        throw CommandError(kExitBackend, "line " + std::to_string(chunk[i].first) + ": " +
                                             (r.skip.empty() ? r.warning : r.skip));
      }
      if (!r.skip.empty()) {
        ++set.skipped;
        err << "line " << chunk[i].first << ": skipped (" << r.skip << ")\n";
        continue;
      }
      if (!r.warning.empty()) err << "line " << chunk[i].first << ": " << r.warning << '\n';
      set.x.append_row(r.features);
      set.y.push_back(r.target);
    }
    chunk.clear();
  };

  std::size_t line_no = 0;
  for (std::string line; std::getline(input.stream(), line);) {
    ++line_no;
    fingerprint.update(line);
    if (!input.stream().eof()) fingerprint.update("\n");
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    chunk.emplace_back(line_no, std::move(line));
    if (chunk.size() == kChunkLines) flush();
  }
  if (!chunk.empty()) flush();

  set.corpus_fingerprint = to_hex(fingerprint.digest());
  if (set.y.size() < kMinTrainingRecords) {
    throw CommandError(kExitInput, "too_few_samples: " + std::to_string(set.y.size()) +
                                       " usable records; at least " + std::to_string(kMinTrainingRecords) +
                                       " are required");
  }
  return set;
}

}  // namespace peerlens::cli
