#pragma once

#include <memory>
#include <ostream>
#include <string>

namespace spdlog {
class logger;
}

namespace peerlens::service {

/// Everything a request log line may carry. There is deliberately no field
/// for bodies, query strings, paths with identifiers, or reviewer IDs.
struct RequestLog {
  std::string request_id;
  std::string method;
  std::string route;  // route template, e.g. /v1/reviewer/{id}
  int status = 0;
  std::size_t bytes_in = 0;
  std::size_t bytes_out = 0;
  double duration_ms = 0.0;
  std::string error_code;  // empty on success
};

/// JSON-lines structured log (one object per line).
class EventLog {
 public:
  /// Writes to standard error.
  EventLog();
  /// Writes to `out`, which must outlive the log; used by tests.
  explicit EventLog(std::ostream& out);

  void request(const RequestLog& entry) const;
  /// Lifecycle events; `detail` must never contain request content.
  void event(const std::string& name, const std::string& detail = {}) const;
  void flush() const;

 private:
  std::shared_ptr<spdlog::logger> logger_;
};

}  // namespace peerlens::service
