#pragma once

#include <atomic>
#include <chrono>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "peerlens/cli/commands.hpp"
#include "peerlens/service/config.hpp"

namespace peerlens::cli {

/// Signals a command should stop with the given exit code after printing
/// `what` to the error stream.
class CommandError : public std::runtime_error {
 public:
  CommandError(int exit_code, const std::string& what) : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

/// Parses YYYY-MM-DD or YYYY-MM-DDTHH:MM:SSZ. Throws CommandError(2).
std::chrono::system_clock::time_point parse_now(const std::string& text);

/// Config file + flag overrides. Throws CommandError(1) on config errors.
service::ServiceConfig resolve_config(const BackendOptions& options);

/// Throws CommandError(1) for config errors and CommandError(3) when a
/// configured model cannot be loaded. `with_model = false` skips the model.
service::Engine make_engine(const BackendOptions& options, bool with_model = true);

/// Runs f(0..n-1) on up to `workers` threads (including the caller).
template <typename F>
void parallel_indices(std::size_t n, std::size_t workers, F&& f) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
}

/// Opens `path` for reading ("-" means `fallback`). Throws CommandError(2).
class InputFile {
 public:
  InputFile(const std::string& path, std::istream& fallback);
  std::istream& stream() { return *stream_; }

 private:
  std::ifstream file_;
  std::istream* stream_;
};

/// Opens `path` for writing ("-" means `fallback`). Throws CommandError(2).
class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& fallback);
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

}  // namespace peerlens::cli
