#include "peerlens/kernels/batch_metrics.hpp"

#include <exception>
#include <mutex>

#include "peerlens/error.hpp"

namespace peerlens::kernels {

std::vector<std::optional<text::StructuredMetrics>> compute_metrics_batch(const text::TextMetrics& metrics,
                                                                          std::span<const MetricsJob> jobs,
                                                                          Exec exec) {
  std::vector<std::optional<text::StructuredMetrics>> out(jobs.size());
  // Exceptions must not escape an OpenMP region; keep the first and rethrow.
  std::exception_ptr failure;
  std::mutex mu;
  auto one = [&](std::size_t i) {
    try {
      out[i] = metrics.compute(jobs[i].review, jobs[i].paper);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kEmptyText) return;
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    }
  };
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(jobs.size()); ++i) one(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i) one(i);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace peerlens::kernels
