#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "peerlens/service/analyzer.hpp"

namespace peerlens::service {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  int threads = 8;
  int drain_timeout_s = 30;
};

struct JudgeConfig {
  std::string kind = "none";  // none | mock | http
  std::string base_url;
  std::string model;
  std::string api_key;
  long long seed = 0;
  int timeout_s = 120;
  int max_in_flight = 2;
};

struct OpenAlexConfig {
  std::string kind = "http";  // none | http | fixtures
  std::string base_url = "https://api.openalex.org";
  std::string mailto;
  std::string fixtures_dir;
  int works_cap = 100;
  int max_in_flight = 4;
  int max_retries = 3;
  int timeout_s = 30;
  int cache_ttl_s = 3600;
};

struct EmbeddingConfig {
  std::string kind = "none";  // none | http
  std::string base_url;
  std::string model;
  std::string api_key;
  int timeout_s = 60;
};

struct ServiceConfig {
  ServerConfig server;
  JudgeConfig judge;
  OpenAlexConfig openalex;
  EmbeddingConfig embeddings;
  Limits limits;
  std::string model_path;
  std::string lexicon_dir;
};

/// The full default configuration as JSON; its shape defines the accepted
/// keys and their types.
nlohmann::json default_config_json();

/// Overlays `doc` and then environment overrides onto the defaults. Every
/// leaf at /a/b/c can be overridden by PEERLENS_A_B_C. Throws
/// Error{kConfigError} whose message starts with the offending key as a JSON
/// pointer (or the environment variable name).
ServiceConfig parse_config(const nlohmann::json& doc, const std::map<std::string, std::string>& env = {});

/// Reads the file (when given) and the process environment.
ServiceConfig load_config(const std::optional<std::filesystem::path>& path);

/// PEERLENS_* variables from the process environment.
std::map<std::string, std::string> peerlens_environment();

/// Builds backends, lexicons and the model handle. A configured model that
/// fails to load leaves the handle empty and is reported through `warning`.
Engine build_engine(const ServiceConfig& config, std::string* warning = nullptr);

}  // namespace peerlens::service
