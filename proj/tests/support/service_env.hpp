#pragma once

// Engines wired to offline backends, and an in-process HTTP service.

#include <ctime>
#include <memory>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "peerlens/service/server.hpp"
#include "support/golden.hpp"

namespace peerlens::testing {

inline std::chrono::system_clock::time_point fixed_now() {
  std::tm tm{};
  tm.tm_year = 2025 - 1900;
  tm.tm_mon = 5;
  tm.tm_mday = 1;
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

/// Mock judge, fixture OpenAlex directory, fixed clock, no model.
inline service::Engine fixture_engine(std::shared_ptr<const judge::JudgeBackend> judge =
                                          std::make_shared<judge::MockJudgeBackend>()) {
  service::Engine e;
  e.judge = std::move(judge);
  e.authors = std::make_shared<profile::FixtureAuthorSource>(fixture_path("openalex"));
  e.now = fixed_now;
  return e;
}

class ServiceHarness {
 public:
  explicit ServiceHarness(service::Engine engine)
      : analyzer_(std::make_shared<service::Analyzer>(std::move(engine))),
        log_(std::make_shared<service::EventLog>(log_stream_)),
        service_(std::make_unique<service::HttpService>(analyzer_, log_, service::HttpService::Options{4})) {
    port_ = service_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { service_->run(); });
  }

  ~ServiceHarness() { stop(); }

  /// Stops serving and joins; afterwards every request has been logged.
  void stop() {
    service_->stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }

  const service::Analyzer& analyzer() const { return *analyzer_; }
  std::string log_text() const {
    log_->flush();
    return log_stream_.str();
  }

 private:
  std::ostringstream log_stream_;
  std::shared_ptr<service::Analyzer> analyzer_;
  std::shared_ptr<service::EventLog> log_;
  std::unique_ptr<service::HttpService> service_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace peerlens::testing
