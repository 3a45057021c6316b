#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace peerlens::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,   // invalid configuration or bind failure
  kExitInput = 2,    // unreadable or invalid input
  kExitBackend = 3,  // judge / OpenAlex / model failure
};

/// Backend selection shared by every command. Unset members fall back to
/// the config file (when given), then to the built-in defaults.
struct BackendOptions {
  std::optional<std::string> config_path;
  std::optional<std::string> judge;              // none | mock | http
  std::optional<std::string> openalex_fixtures;  // directory of <ID>.json
  bool no_openalex = false;
  std::optional<std::string> model_path;
  /// Fixed "current time" (YYYY-MM-DD or full ISO-8601 UTC) for reproducible
  /// tenure and fetched_at values.
  std::optional<std::string> now;
};

struct AnalyzeOptions {
  BackendOptions backends;
  std::string input = "-";  // "-" reads stdin
  std::string format = "json";  // json | table
  bool omit_timings = false;
};

struct AuditOptions {
  BackendOptions backends;
  std::string corpus;
  std::string out = "-";
  std::optional<std::string> summary;  // default: standard error
  bool skip_llm = false;
  std::size_t concurrency = 4;
  std::size_t chunk_lines = 256;
  bool omit_timings = false;
};

struct TrainOptions {
  BackendOptions backends;
  std::string corpus;
  std::string model_kind = "linear";
  std::string out;
  std::uint64_t seed = 0;
  bool use_human_rubric = false;
  bool fail_fast = false;
};

struct EvaluateOptions {
  BackendOptions backends;
  std::string corpus;
  std::string model_kind = "linear";
  std::size_t k = 10;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  bool use_human_rubric = false;
  bool fail_fast = false;
};

struct ServeOptions {
  BackendOptions backends;
  std::optional<int> port;
  std::optional<std::string> host;
};

/// Minimum number of annotated records for train and evaluate.
inline constexpr std::size_t kMinTrainingRecords = 20;

int cmd_analyze(const AnalyzeOptions& options, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_audit(const AuditOptions& options, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_train(const TrainOptions& options, std::ostream& out, std::ostream& err);
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);
/// Blocks until SIGINT/SIGTERM; SIGHUP reloads the model file.
int cmd_serve(const ServeOptions& options, std::ostream& err);

/// Full command-line entry point (argv[0] is the program name).
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace peerlens::cli
