#include "peerlens/estimator/linear.hpp"

#include <Eigen/Dense>

namespace peerlens::estimator {

LinearParams fit_linear_params(const Matrix& z, std::span<const double> y, double ridge) {
  check_training_shape(z, y);
  if (ridge < 0.0) throw Error(ErrorCode::kInvalidArgument, "ridge must be >= 0");
  const std::size_t n = z.rows();
  const std::size_t d = z.cols();

  LinearParams p;
  p.ridge = ridge;
  p.weights.assign(d, 0.0);
  double y_sum = 0.0;
  for (double v : y) y_sum += v;
  p.intercept = y_sum / static_cast<double>(n);

  // Columns that standardized to all zeros carry no signal and would make
  // the unregularized system singular.
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (z(i, j) != 0.0) {
        active.push_back(j);
        break;
      }
    }
  }
  if (active.empty()) return p;

  const auto k = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), k);
  Eigen::VectorXd b(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < k; ++c) a(static_cast<Eigen::Index>(i), c) = z(i, active[static_cast<std::size_t>(c)]);
    b(static_cast<Eigen::Index>(i)) = y[i] - p.intercept;
  }
  Eigen::MatrixXd gram = a.transpose() * a;
  gram.diagonal().array() += ridge;
  const Eigen::VectorXd rhs = a.transpose() * b;

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  // rcond() ignores exactly-zero pivots, so check the diagonal factor too.
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-13 || pivots.minCoeff() <= 1e-13 * pivots.maxCoeff()) {
    throw Error(ErrorCode::kSingularSystem, "normal equations are numerically singular; increase the ridge");
  }
  const Eigen::VectorXd w = ldlt.solve(rhs);
  for (Eigen::Index c = 0; c < k; ++c) p.weights[active[static_cast<std::size_t>(c)]] = w(c);
  return p;
}

double predict_linear(const LinearParams& p, std::span<const double> row) {
  if (row.size() != p.weights.size()) throw Error(ErrorCode::kDimensionMismatch, "linear model width mismatch");
  double out = p.intercept;
  for (std::size_t j = 0; j < row.size(); ++j) out += p.weights[j] * row[j];
  return out;
}

RawCoefficients to_raw(const LinearParams& p, const Standardization& s) {
  RawCoefficients raw;
  raw.intercept = p.intercept;
  raw.weights.resize(p.weights.size());
  for (std::size_t j = 0; j < p.weights.size(); ++j) {
    raw.weights[j] = p.weights[j] / s.scale[j];
    raw.intercept -= raw.weights[j] * s.mean[j];
  }
  return raw;
}

}  // namespace peerlens::estimator
