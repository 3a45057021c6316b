#include "peerlens/service/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "peerlens/text/similarity.hpp"

extern char** environ;

namespace peerlens::service {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kConfigError, where + ": " + what);
}

std::string type_name(const json& j) {
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  return j.type_name();
}

void overlay(json& base, const json& doc, const std::string& pointer) {
  if (!doc.is_object()) fail(pointer.empty() ? "/" : pointer, "expected an object");
  for (const auto& [key, value] : doc.items()) {
    const std::string here = pointer + "/" + key;
    if (!base.contains(key)) fail(here, "unknown key");
    json& slot = base[key];
    if (slot.is_object()) {
      overlay(slot, value, here);
    } else if (slot.is_number_integer()) {
      if (!value.is_number_integer()) fail(here, "expected integer, got " + type_name(value));
      slot = value;
    } else if (type_name(slot) != type_name(value)) {
      fail(here, "expected " + type_name(slot) + ", got " + type_name(value));
    } else {
      slot = value;
    }
  }
}

std::string env_name(const std::string& pointer) {
  std::string name = "PEERLENS";
  for (char c : pointer) name.push_back(c == '/' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return name;
}

void apply_env(json& node, const std::string& pointer, const std::map<std::string, std::string>& env) {
  for (auto& [key, slot] : node.items()) {
    const std::string here = pointer + "/" + key;
    if (slot.is_object()) {
      apply_env(slot, here, env);
      continue;
    }
    const auto it = env.find(env_name(here));
    if (it == env.end()) continue;
    const std::string& raw = it->second;
    if (slot.is_string()) {
      slot = raw;
    } else if (slot.is_boolean()) {
      if (raw != "true" && raw != "false") fail(it->first, "expected true or false");
      slot = raw == "true";
    } else {
      try {
        std::size_t used = 0;
        const long long v = std::stoll(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        slot = v;
      } catch (const std::exception&) {
        fail(it->first, "expected an integer");
      }
    }
  }
}

void check_enum(const std::string& pointer, const std::string& value, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
  fail(pointer, "must be one of " + list + ", got '" + value + "'");
}

int in_range(const json& root, const std::string& pointer, long long lo, long long hi) {
  const long long v = root.at(json::json_pointer(pointer)).get<long long>();
  if (v < lo || v > hi) fail(pointer, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::string str(const json& root, const std::string& pointer) {
  return root.at(json::json_pointer(pointer)).get<std::string>();
}

}  // namespace

json default_config_json() {
  return {
      {"server", {{"host", "127.0.0.1"}, {"port", 8080}, {"threads", 8}, {"drain_timeout_s", 30}}},
      {"backends",
       {{"judge",
         {{"kind", "none"},
          {"base_url", ""},
          {"model", ""},
          {"api_key", ""},
          {"seed", 0},
          {"timeout_s", 120},
          {"max_in_flight", 2}}},
        {"openalex",
         {{"kind", "http"},
          {"base_url", "https://api.openalex.org"},
          {"mailto", ""},
          {"fixtures_dir", ""},
          {"works_cap", 100},
          {"max_in_flight", 4},
          {"max_retries", 3},
          {"timeout_s", 30},
          {"cache_ttl_s", 3600}}},
        {"embeddings", {{"kind", "none"}, {"base_url", ""}, {"model", ""}, {"api_key", ""}, {"timeout_s", 60}}}}},
      {"limits", {{"max_review_bytes", 1 << 20}, {"max_batch", 500}, {"batch_concurrency", 4}, {"judge_retries", 2}}},
      {"model", {{"path", ""}}},
      {"lexicons", {{"dir", ""}}},
  };
}

ServiceConfig parse_config(const json& doc, const std::map<std::string, std::string>& env) {
  json root = default_config_json();
  if (!doc.is_null()) overlay(root, doc, "");
  apply_env(root, "", env);

  ServiceConfig c;
  c.server.host = str(root, "/server/host");
  c.server.port = in_range(root, "/server/port", 0, 65535);
  c.server.threads = in_range(root, "/server/threads", 1, 1024);
  c.server.drain_timeout_s = in_range(root, "/server/drain_timeout_s", 0, 3600);

  c.judge.kind = str(root, "/backends/judge/kind");
  check_enum("/backends/judge/kind", c.judge.kind, {"none", "mock", "http"});
  c.judge.base_url = str(root, "/backends/judge/base_url");
  c.judge.model = str(root, "/backends/judge/model");
  c.judge.api_key = str(root, "/backends/judge/api_key");
  c.judge.seed = root.at(json::json_pointer("/backends/judge/seed")).get<long long>();
  c.judge.timeout_s = in_range(root, "/backends/judge/timeout_s", 1, 3600);
  c.judge.max_in_flight = in_range(root, "/backends/judge/max_in_flight", 1, 256);
  if (c.judge.kind == "http" && c.judge.base_url.empty()) fail("/backends/judge/base_url", "required for kind http");

  c.openalex.kind = str(root, "/backends/openalex/kind");
  check_enum("/backends/openalex/kind", c.openalex.kind, {"none", "http", "fixtures"});
  c.openalex.base_url = str(root, "/backends/openalex/base_url");
  c.openalex.mailto = str(root, "/backends/openalex/mailto");
  c.openalex.fixtures_dir = str(root, "/backends/openalex/fixtures_dir");
  c.openalex.works_cap = in_range(root, "/backends/openalex/works_cap", 1, 10000);
  c.openalex.max_in_flight = in_range(root, "/backends/openalex/max_in_flight", 1, 256);
  c.openalex.max_retries = in_range(root, "/backends/openalex/max_retries", 0, 20);
  c.openalex.timeout_s = in_range(root, "/backends/openalex/timeout_s", 1, 3600);
  c.openalex.cache_ttl_s = in_range(root, "/backends/openalex/cache_ttl_s", 0, 86400 * 7);
  if (c.openalex.kind == "fixtures" && c.openalex.fixtures_dir.empty()) {
    fail("/backends/openalex/fixtures_dir", "required for kind fixtures");
  }

  c.embeddings.kind = str(root, "/backends/embeddings/kind");
  check_enum("/backends/embeddings/kind", c.embeddings.kind, {"none", "http"});
  c.embeddings.base_url = str(root, "/backends/embeddings/base_url");
  c.embeddings.model = str(root, "/backends/embeddings/model");
  c.embeddings.api_key = str(root, "/backends/embeddings/api_key");
  c.embeddings.timeout_s = in_range(root, "/backends/embeddings/timeout_s", 1, 3600);
  if (c.embeddings.kind == "http" && c.embeddings.base_url.empty()) {
    fail("/backends/embeddings/base_url", "required for kind http");
  }

  c.limits.max_review_bytes = static_cast<std::size_t>(in_range(root, "/limits/max_review_bytes", 1, 64 << 20));
  c.limits.max_batch = static_cast<std::size_t>(in_range(root, "/limits/max_batch", 1, 100000));
  c.limits.batch_concurrency = static_cast<std::size_t>(in_range(root, "/limits/batch_concurrency", 1, 256));
  c.limits.judge_retries = in_range(root, "/limits/judge_retries", 0, 10);
  c.model_path = str(root, "/model/path");
  c.lexicon_dir = str(root, "/lexicons/dir");
  return c;
}

std::map<std::string, std::string> peerlens_environment() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string_view entry(*e);
    if (entry.rfind("PEERLENS_", 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string_view::npos) continue;
    env.emplace(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
  }
  return env;
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& path) {
  json doc;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw Error(ErrorCode::kConfigError, path->string() + ": cannot open config file");
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kConfigError, path->string() + ": " + e.what());
    }
  }
  return parse_config(doc, peerlens_environment());
}

Engine build_engine(const ServiceConfig& c, std::string* warning) {
  Engine engine;
  auto lexicons = std::make_shared<text::LexiconSet>(c.lexicon_dir.empty() ? text::LexiconSet::bundled()
                                                                            : text::LexiconSet::load(c.lexicon_dir));
  std::shared_ptr<const text::EmbeddingBackend> embeddings;
  if (c.embeddings.kind == "http") {
    embeddings = std::make_shared<text::HttpEmbeddingBackend>(text::HttpEmbeddingBackend::Config{
        c.embeddings.base_url, c.embeddings.model, c.embeddings.api_key, std::chrono::seconds(c.embeddings.timeout_s)});
  }
  engine.metrics = std::make_shared<text::TextMetrics>(std::move(lexicons), std::move(embeddings));

  if (c.judge.kind == "mock") {
    engine.judge = std::make_shared<judge::MockJudgeBackend>();
  } else if (c.judge.kind == "http") {
    judge::HttpChatBackend::Config jc;
    jc.base_url = c.judge.base_url;
    jc.model = c.judge.model;
    jc.api_key = c.judge.api_key;
    jc.seed = c.judge.seed;
    jc.timeout = std::chrono::seconds(c.judge.timeout_s);
    jc.max_in_flight = c.judge.max_in_flight;
    engine.judge = std::make_shared<judge::HttpChatBackend>(std::move(jc));
  }

  std::shared_ptr<const profile::AuthorSource> authors;
  if (c.openalex.kind == "fixtures") {
    authors = std::make_shared<profile::FixtureAuthorSource>(c.openalex.fixtures_dir,
                                                             static_cast<std::size_t>(c.openalex.works_cap));
  } else if (c.openalex.kind == "http") {
    profile::OpenAlexClient::Config oc;
    oc.base_url = c.openalex.base_url;
    oc.mailto = c.openalex.mailto;
    oc.works_cap = static_cast<std::size_t>(c.openalex.works_cap);
    oc.max_in_flight = c.openalex.max_in_flight;
    oc.max_retries = c.openalex.max_retries;
    oc.timeout = std::chrono::seconds(c.openalex.timeout_s);
    authors = std::make_shared<profile::OpenAlexClient>(std::move(oc));
  }
  if (authors && c.openalex.cache_ttl_s > 0) {
    authors = std::make_shared<profile::CachingAuthorSource>(std::move(authors),
                                                             std::chrono::seconds(c.openalex.cache_ttl_s));
  }
  engine.authors = std::move(authors);
  engine.limits = c.limits;

  if (!c.model_path.empty()) {
    try {
      engine.model->set(std::make_shared<const estimator::TrainedModel>(estimator::load_model(c.model_path)));
    } catch (const Error& e) {
      if (warning != nullptr) *warning = std::string(code_name(e.code()));
    }
  }
  return engine;
}

}  // namespace peerlens::service
