#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "peerlens/estimator/model.hpp"
#include "peerlens/judge/backend.hpp"
#include "peerlens/judge/rubric.hpp"
#include "peerlens/profile/openalex.hpp"
#include "peerlens/review.hpp"
#include "peerlens/service/codec.hpp"
#include "peerlens/service/report.hpp"
#include "peerlens/text/metrics.hpp"

namespace peerlens::service {

/// Read-mostly holder of the current model. Readers take a snapshot and keep
/// it for the whole request, so a concurrent swap never blocks or tears them.
class ModelHandle {
 public:
  std::shared_ptr<const estimator::TrainedModel> get() const {
    std::lock_guard lock(mu_);
    return model_;
  }
  void set(std::shared_ptr<const estimator::TrainedModel> model) {
    std::lock_guard lock(mu_);
    model_ = std::move(model);
  }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const estimator::TrainedModel> model_;
};

struct Limits {
  std::size_t max_review_bytes = 1 << 20;
  std::size_t max_batch = 500;
  std::size_t batch_concurrency = 4;
  int judge_retries = 2;
};

/// Everything a request needs. Backends may be null, which makes the
/// corresponding section degrade instead of calling out.
struct Engine {
  std::shared_ptr<const text::TextMetrics> metrics = std::make_shared<text::TextMetrics>();
  std::shared_ptr<const judge::JudgeBackend> judge;
  std::shared_ptr<const judge::Rubric> rubric = std::make_shared<judge::Rubric>(judge::Rubric::bundled());
  std::shared_ptr<const profile::AuthorSource> authors;
  std::shared_ptr<ModelHandle> model = std::make_shared<ModelHandle>();
  std::function<std::chrono::system_clock::time_point()> now = [] { return std::chrono::system_clock::now(); };
  Limits limits;
};

class Analyzer {
 public:
  explicit Analyzer(Engine engine) : engine_(std::move(engine)) {}

  const Engine& engine() const noexcept { return engine_; }

  /// Throws RequestError for 422 (invariants), 413 (size) and 503 (estimate
  /// required but no model). Optional-stage failures degrade the report.
  QualityReport analyze(const ReviewInput& input) const;

  /// One entry per body element, in order: a report or {"error": {...}}.
  /// Throws RequestError 400 for a non-array or an out-of-range length.
  nlohmann::json analyze_batch(const nlohmann::json& body, const JsonOptions& options = {}) const;

  /// Throws RequestError: 422 bad ID syntax, 404 unknown author, 502
  /// upstream failure (status echoed), 503 when no author source is set.
  profile::ReviewerProfile reviewer(const std::string& raw_id, const std::string& submission_text) const;

 private:
  Engine engine_;
};

/// {"error": {"code", "message", "status"[, "upstream_status"]}} for a
/// failed request or batch item.
nlohmann::json error_json(const RequestError& e);

}  // namespace peerlens::service
