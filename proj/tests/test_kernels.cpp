#include <doctest.h>

#include "peerlens/kernels/batch_metrics.hpp"
#include "support/random_text.hpp"

using namespace peerlens;

TEST_CASE("batch metrics: parallel equals serial equals one-by-one") {
  Rng rng(404);
  std::vector<std::string> reviews, papers;
  for (int i = 0; i < 500; ++i) {
    reviews.push_back(i % 50 == 7 ? std::string("  ;; ") : testing::random_text(rng, 120));
    papers.push_back(testing::random_text(rng, 40));
  }
  std::vector<kernels::MetricsJob> jobs;
  for (std::size_t i = 0; i < reviews.size(); ++i) jobs.push_back({reviews[i], papers[i]});

  const text::TextMetrics metrics;
  const auto serial = kernels::compute_metrics_batch(metrics, jobs, Exec::kSerial);
  const auto parallel = kernels::compute_metrics_batch(metrics, jobs, Exec::kParallel);
  REQUIRE(serial.size() == jobs.size());
  CHECK(serial == parallel);
  std::size_t empty = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!serial[i]) {
      ++empty;
      continue;
    }
    CHECK(*serial[i] == metrics.compute(reviews[i], papers[i]));
  }
  CHECK(empty == 10);
}

TEST_CASE("batch metrics: empty input") {
  const text::TextMetrics metrics;
  CHECK(kernels::compute_metrics_batch(metrics, {}).empty());
}
