#pragma once

#include <span>
#include <vector>

#include "peerlens/estimator/matrix.hpp"
#include "peerlens/estimator/standardizer.hpp"

namespace peerlens::estimator {

inline constexpr double kDefaultRidge = 1e-6;

/// Ridge regression on standardized features. The intercept is the target
/// mean and is not penalized; constant columns get weight 0.
struct LinearParams {
  std::vector<double> weights;  // per standardized feature
  double intercept = 0.0;
  double ridge = kDefaultRidge;

  bool operator==(const LinearParams&) const = default;
};

/// Solves (ZᵀZ + λI) w = Zᵀ(y − ȳ) over the non-constant standardized
/// columns Z. Throws SingularSystem when the system is numerically singular.
LinearParams fit_linear_params(const Matrix& standardized, std::span<const double> y, double ridge);

double predict_linear(const LinearParams& p, std::span<const double> standardized_row);

/// Coefficients mapped back to raw feature units: y ≈ intercept + Σ w_j x_j.
struct RawCoefficients {
  std::vector<double> weights;
  double intercept = 0.0;
};
RawCoefficients to_raw(const LinearParams& p, const Standardization& s);

}  // namespace peerlens::estimator
