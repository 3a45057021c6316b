#pragma once

#include <span>
#include <vector>

#include "peerlens/estimator/matrix.hpp"

namespace peerlens::estimator {

/// Per-feature z-scoring. Columns whose values are all identical get
/// mean = that value and scale = 1, so they standardize to exactly 0.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> scale;  // population standard deviation, > 0
  std::vector<bool> constant;

  static Standardization fit(const Matrix& x);

  std::size_t size() const noexcept { return mean.size(); }
  void apply(std::span<const double> in, std::span<double> out) const;
  Matrix apply(const Matrix& x) const;

  bool operator==(const Standardization&) const = default;
};

}  // namespace peerlens::estimator
