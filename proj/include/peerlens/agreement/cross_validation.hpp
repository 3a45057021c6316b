#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "peerlens/estimator/model.hpp"

namespace peerlens::agreement {

/// Seeded shuffle of 0..n-1 cut into k contiguous folds; the first n % k
/// folds hold one extra sample. Throws TooFewSamples unless every fold has
/// at least two samples.
std::vector<std::vector<std::size_t>> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed);

struct CvReport {
  estimator::ModelKind model = estimator::ModelKind::kLinear;
  std::size_t k = 10;
  std::uint64_t seed = 0;
  /// τ_b per held-out fold; empty when a fold's predictions or targets are
  /// constant, which leaves τ_b undefined.
  std::vector<std::optional<double>> per_fold;
  /// Mean over the defined folds.
  double mean_tau = 0.0;

  nlohmann::json to_json() const;
};

/// k-fold cross-validation of `kind` on (x, y). Folds are independent and run
/// concurrently under Exec::kParallel; results do not depend on Exec.
/// Throws DegenerateInput if no fold yields a defined τ_b.
CvReport cross_validate(const estimator::Matrix& x, std::span<const double> y, estimator::ModelKind kind,
                        const estimator::TrainOptions& options, std::size_t k = 10, std::uint64_t seed = 0,
                        Exec exec = Exec::kParallel);

}  // namespace peerlens::agreement
