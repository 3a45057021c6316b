#include "common.hpp"

#include <ctime>
#include <iomanip>
#include <sstream>

namespace peerlens::cli {

std::chrono::system_clock::time_point parse_now(const std::string& text) {
  std::tm tm{};
  std::istringstream in(text);
  if (text.size() == 10) {
    in >> std::get_time(&tm, "%Y-%m-%d");
  } else {
    in >> std::get_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  }
  if (in.fail()) throw CommandError(kExitInput, "--now: expected YYYY-MM-DD or YYYY-MM-DDTHH:MM:SSZ");
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

service::ServiceConfig resolve_config(const BackendOptions& o) {
  try {
    auto c = service::load_config(o.config_path ? std::optional<std::filesystem::path>(*o.config_path)
                                                : std::nullopt);
    if (o.judge) {
      if (*o.judge != "none" && *o.judge != "mock" && *o.judge != "http") {
        throw Error(ErrorCode::kConfigError, "--judge: must be none, mock or http");
      }
      c.judge.kind = *o.judge;
      if (c.judge.kind == "http" && c.judge.base_url.empty()) {
        throw Error(ErrorCode::kConfigError, "/backends/judge/base_url: required for --judge http");
      }
    }
    if (o.openalex_fixtures) {
      c.openalex.kind = "fixtures";
      c.openalex.fixtures_dir = *o.openalex_fixtures;
      c.openalex.cache_ttl_s = 0;
    }
    if (o.no_openalex) c.openalex.kind = "none";
    if (o.model_path) c.model_path = *o.model_path;
    return c;
  } catch (const Error& e) {
    throw CommandError(kExitConfig, std::string("config error: ") + e.what());
  }
}

service::Engine make_engine(const BackendOptions& o, bool with_model) {
  auto config = resolve_config(o);
  if (!with_model) config.model_path.clear();
  std::string warning;
  service::Engine engine;
  try {
    engine = service::build_engine(config, &warning);
  } catch (const Error& e) {
    throw CommandError(kExitConfig, std::string("config error: ") + e.what());
  }
  if (!warning.empty()) {
    throw CommandError(kExitBackend, "cannot load model " + config.model_path + " (" + warning + ")");
  }
  if (o.now) {
    const auto fixed = parse_now(*o.now);
    engine.now = [fixed] { return fixed; };
  }
  return engine;
}

InputFile::InputFile(const std::string& path, std::istream& fallback) : stream_(&fallback) {
  if (path == "-") return;
  file_.open(path, std::ios::binary);
  if (!file_) throw CommandError(kExitInput, "cannot open " + path);
  stream_ = &file_;
}

OutputFile::OutputFile(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
  if (path == "-") return;
  file_.open(path, std::ios::binary | std::ios::trunc);
  if (!file_) throw CommandError(kExitInput, "cannot write " + path);
  stream_ = &file_;
}

}  // namespace peerlens::cli
