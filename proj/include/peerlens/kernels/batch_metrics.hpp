#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "peerlens/kernels/exec.hpp"
#include "peerlens/text/metrics.hpp"

namespace peerlens::kernels {

struct MetricsJob {
  std::string_view review;
  std::string_view paper;
};

/// Structured metrics for every job; empty reviews yield nullopt. Output
/// order matches input order and does not depend on Exec.
std::vector<std::optional<text::StructuredMetrics>> compute_metrics_batch(const text::TextMetrics& metrics,
                                                                          std::span<const MetricsJob> jobs,
                                                                          Exec exec = Exec::kParallel);

}  // namespace peerlens::kernels
