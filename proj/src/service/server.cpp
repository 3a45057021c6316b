#include "peerlens/service/server.hpp"

#include <chrono>
#include <cstdio>
#include <random>

#include <httplib.h>

#include "peerlens/version.hpp"

namespace peerlens::service {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kJson = "application/json";
constexpr const char* kErrorHeader = "X-Error-Code";
constexpr const char* kRequestIdHeader = "X-Request-Id";

thread_local Clock::time_point request_start;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, const RequestError& e) {
  res.set_header(kErrorHeader, e.code());
  send_json(res, e.status(), error_json(e));
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error&) {
    throw RequestError(400, "malformed_json", "request body is not valid JSON");
  }
}

std::string route_template(const std::string& path) {
  if (path == "/v1/analyze" || path == "/v1/analyze/batch" || path == "/v1/health") return path;
  if (path.rfind("/v1/reviewer/", 0) == 0) return "/v1/reviewer/{id}";
  return "(unmatched)";
}

std::string process_nonce() {
  std::random_device rd;
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", rd());
  return buf;
}

}  // namespace

HttpService::HttpService(std::shared_ptr<const Analyzer> analyzer, std::shared_ptr<const EventLog> log,
                         Options options)
    : analyzer_(std::move(analyzer)), log_(std::move(log)), server_(std::make_unique<httplib::Server>()) {
  const int threads = std::max(1, options.threads);
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<std::size_t>(threads)); };
  const auto& limits = analyzer_->engine().limits;
  server_->set_payload_max_length(limits.max_review_bytes * std::min<std::size_t>(limits.max_batch, 64) + (1 << 20));
  install_routes();
}

HttpService::~HttpService() { stop(); }

void HttpService::install_routes() {
  const std::string nonce = process_nonce();

  server_->set_pre_routing_handler([this, nonce](const httplib::Request& req, httplib::Response& res) {
    request_start = Clock::now();
    std::string id = req.get_header_value(kRequestIdHeader);
    if (id.empty() || id.size() > 64) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s-%08llx", nonce.c_str(), next_id_.fetch_add(1));
      id = buf;
    }
    res.set_header(kRequestIdHeader, id);
    return httplib::Server::HandlerResponse::Unhandled;
  });

  server_->set_logger([this](const httplib::Request& req, const httplib::Response& res) {
    RequestLog entry;
    entry.request_id = res.get_header_value(kRequestIdHeader);
    entry.method = req.method;
    entry.route = route_template(req.path);
    entry.status = res.status;
    entry.bytes_in = req.body.size();
    entry.bytes_out = res.body.size();
    entry.duration_ms = std::chrono::duration<double, std::milli>(Clock::now() - request_start).count();
    entry.error_code = res.get_header_value(kErrorHeader);
    log_->request(entry);
  });

  server_->set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const RequestError& e) {
      send_error(res, e);
    } catch (const std::exception& e) {
      send_error(res, RequestError(500, "internal_error", e.what()));
    } catch (...) {
      send_error(res, RequestError(500, "internal_error", "unknown failure"));
    }
  });

  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      send_error(res, RequestError(404, "no_route", "no such endpoint"));
    } else if (res.status == 413) {
      send_error(res, RequestError(413, "payload_too_large", "request body too large"));
    }
  });

  server_->Post("/v1/analyze", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const ReviewInput in = parse_review_input(parse_body(req));
      const QualityReport report = analyzer_->analyze(in);
      send_json(res, 200, to_json(report));
    } catch (const RequestError& e) {
      send_error(res, e);
    }
  });

  server_->Post("/v1/analyze/batch", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      send_json(res, 200, analyzer_->analyze_batch(parse_body(req)));
    } catch (const RequestError& e) {
      send_error(res, e);
    }
  });

  server_->Get(R"(/v1/reviewer/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      const auto p = analyzer_->reviewer(req.matches[1], req.get_param_value("submission_text"));
      send_json(res, 200, to_json(p));
    } catch (const RequestError& e) {
      send_error(res, e);
    }
  });

  server_->Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200,
              {{"status", "ok"},
               {"engine_version", kEngineVersion},
               {"model_loaded", analyzer_->engine().model->get() != nullptr}});
  });
}

int HttpService::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
    if (bound <= 0) throw Error(ErrorCode::kConfigError, "cannot bind " + host + " on any port");
  } else if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::kConfigError, "cannot bind " + host + ":" + std::to_string(port));
  }
  log_->event("listening", host + ":" + std::to_string(bound));
  return bound;
}

void HttpService::run() { server_->listen_after_bind(); }

void HttpService::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace peerlens::service
