#include <cmath>
#include <iostream>
#include <limits>
#include <map>

#include "common.hpp"
#include "peerlens/service/analyzer.hpp"

namespace peerlens::cli {
namespace {

using nlohmann::json;

struct Running {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
    min = std::min(min, v);
    max = std::max(max, v);
  }
  json to_json() const {
    return {{"min", min}, {"mean", mean}, {"max", max}, {"stddev", std::sqrt(m2 / static_cast<double>(n))}};
  }
};

struct Outcome {
  std::string line;  // serialized report, or empty when skipped
  std::string skip_code;
  std::string skip_message;
  bool degraded = false;
  json structured;
  std::optional<double> estimate;
};

Outcome process(const service::Analyzer& analyzer, const std::string& text, const AuditOptions& o) {
  Outcome r;
  const auto doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    r.skip_code = "malformed_json";
    r.skip_message = "line is not valid JSON";
    return r;
  }
  try {
    auto input = service::parse_review_input(doc);
    if (o.skip_llm) input.include_llm = false;
    const auto report = analyzer.analyze(input);
    const auto j = service::to_json(report, service::JsonOptions{!o.omit_timings, false});
    r.line = j.dump();
    r.degraded = report.degraded;
    r.structured = j["structured"];
    r.estimate = report.overall_estimate;
  } catch (const service::RequestError& e) {
    r.skip_code = e.code();
    r.skip_message = e.what();
  } catch (const std::exception& e) {
    r.skip_code = "internal_error";
    r.skip_message = e.what();
  }
  return r;
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

int cmd_audit(const AuditOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  try {
    if (o.chunk_lines == 0 || o.concurrency == 0) throw CommandError(kExitInput, "--chunk and --concurrency must be positive");
    InputFile corpus(o.corpus, in);
    OutputFile output(o.out, out);
    const service::Analyzer analyzer(make_engine(o.backends));

    std::size_t count = 0, skipped = 0, degraded = 0, line_no = 0;
    std::map<std::string, Running> stats;
    std::vector<std::pair<std::size_t, std::string>> chunk;
    std::vector<Outcome> results;

    auto flush = [&] {
      results.assign(chunk.size(), Outcome{});
      parallel_indices(chunk.size(), o.concurrency, [&](std::size_t i) {
        results[i] = process(analyzer, chunk[i].second, o);
      });
      for (std::size_t i = 0; i < chunk.size(); ++i) {
        auto& r = results[i];
        if (r.line.empty()) {
          ++skipped;
          err << "line " << chunk[i].first << ": skipped (" << r.skip_code << ": " << r.skip_message << ")\n";
          continue;
        }
        ++count;
        if (r.degraded) ++degraded;
        output.stream() << r.line << '\n';
        for (const auto& [key, value] : r.structured.items()) {
          stats[key].add(value.is_boolean() ? (value.get<bool>() ? 1.0 : 0.0) : value.get<double>());
        }
        if (r.estimate) stats["overall_estimate"].add(*r.estimate);
      }
      chunk.clear();
    };

    for (std::string line; std::getline(corpus.stream(), line);) {
      ++line_no;
      if (blank(line)) continue;
      chunk.emplace_back(line_no, std::move(line));
      if (chunk.size() == o.chunk_lines) flush();
    }
    if (!chunk.empty()) flush();
    output.stream().flush();

    json summary = {{"count", count}, {"skipped", skipped}, {"degraded", degraded}, {"metrics", json::object()}};
    for (const auto& [key, s] : stats) summary["metrics"][key] = s.to_json();
    if (o.summary) {
      OutputFile file(*o.summary, err);
      file.stream() << summary.dump(2) << '\n';
    } else {
      err << summary.dump(2) << '\n';
    }

    const std::size_t total = count + skipped;
    if (total == 0) {
      err << "corpus has no records\n";
      return kExitInput;
    }
    if (2 * skipped > total) {
      err << "more than half of the records were malformed\n";
      return kExitInput;
    }
    return kExitOk;
  } catch (const CommandError& e) {
    err << e.what() << '\n';
    return e.exit_code();
  }
}

}  // namespace peerlens::cli
