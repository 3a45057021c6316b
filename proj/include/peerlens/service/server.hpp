#pragma once

#include <atomic>
#include <memory>
#include <string>

#include "peerlens/service/analyzer.hpp"
#include "peerlens/service/logging.hpp"

namespace httplib {
class Server;
}

namespace peerlens::service {

/// The HTTP front end:
///   POST /v1/analyze          ReviewInput -> QualityReport
///   POST /v1/analyze/batch    [ReviewInput] -> [QualityReport | error]
///   GET  /v1/reviewer/{id}    ?submission_text= -> ReviewerProfile
///   GET  /v1/health           -> {status, engine_version, model_loaded}
class HttpService {
 public:
  struct Options {
    int threads = 8;
  };

  HttpService(std::shared_ptr<const Analyzer> analyzer, std::shared_ptr<const EventLog> log, Options options);
  HttpService(std::shared_ptr<const Analyzer> analyzer, std::shared_ptr<const EventLog> log)
      : HttpService(std::move(analyzer), std::move(log), Options{}) {}
  ~HttpService();

  /// Port 0 picks a free port. Returns the bound port; throws ConfigError on
  /// bind failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(); in-flight requests finish before it returns.
  void run();
  void stop();

 private:
  void install_routes();

  std::shared_ptr<const Analyzer> analyzer_;
  std::shared_ptr<const EventLog> log_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<unsigned long long> next_id_{1};
};

}  // namespace peerlens::service
