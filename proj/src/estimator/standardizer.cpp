#include "peerlens/estimator/standardizer.hpp"

#include <cmath>

namespace peerlens::estimator {

Standardization Standardization::fit(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  Standardization s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  s.constant.assign(d, true);
  if (n == 0) return s;

  for (std::size_t j = 0; j < d; ++j) {
    const double first = x(0, j);
    double sum = 0.0;
    bool constant = true;
    for (std::size_t i = 0; i < n; ++i) {
      sum += x(i, j);
      constant = constant && x(i, j) == first;
    }
    s.constant[j] = constant;
    if (constant) {
      s.mean[j] = first;
      continue;
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dlt = x(i, j) - mean;
      ss += dlt * dlt;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    s.mean[j] = mean;
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

void Standardization::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != mean.size() || out.size() != mean.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "standardization width mismatch");
  }
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - mean[j]) / scale[j];
}

Matrix Standardization::apply(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) apply(x.row(i), out.row(i));
  return out;
}

}  // namespace peerlens::estimator
