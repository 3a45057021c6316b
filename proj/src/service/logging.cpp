#include "peerlens/service/logging.hpp"

#include <atomic>
#include <cstdio>

#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace peerlens::service {
namespace {

std::shared_ptr<spdlog::logger> make_logger(spdlog::sink_ptr sink) {
  static std::atomic<int> counter{0};
  auto logger = std::make_shared<spdlog::logger>("peerlens-" + std::to_string(counter++), std::move(sink));
  logger->set_pattern(R"({"ts":"%Y-%m-%dT%H:%M:%S.%eZ","level":"%l",%v})", spdlog::pattern_time_type::utc);
  logger->set_level(spdlog::level::info);
  logger->flush_on(spdlog::level::info);
  return logger;
}

// Drops the surrounding braces so the fields splice into the pattern.
std::string fields(const nlohmann::json& j) {
  const std::string s = j.dump();
  return s.substr(1, s.size() - 2);
}

}  // namespace

EventLog::EventLog() : logger_(make_logger(std::make_shared<spdlog::sinks::stderr_sink_mt>())) {}

EventLog::EventLog(std::ostream& out) : logger_(make_logger(std::make_shared<spdlog::sinks::ostream_sink_mt>(out))) {}

void EventLog::request(const RequestLog& e) const {
  nlohmann::json j = {{"event", "request"},          {"request_id", e.request_id}, {"method", e.method},
                      {"route", e.route},            {"status", e.status},         {"bytes_in", e.bytes_in},
                      {"bytes_out", e.bytes_out},    {"duration_ms", e.duration_ms}};
  if (!e.error_code.empty()) j["error_code"] = e.error_code;
  logger_->log(e.status >= 500 ? spdlog::level::warn : spdlog::level::info, fields(j));
}

void EventLog::event(const std::string& name, const std::string& detail) const {
  nlohmann::json j = {{"event", name}};
  if (!detail.empty()) j["detail"] = detail;
  logger_->info(fields(j));
}

void EventLog::flush() const { logger_->flush(); }

}  // namespace peerlens::service
