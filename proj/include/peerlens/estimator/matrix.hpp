#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "peerlens/error.hpp"

namespace peerlens::estimator {

/// Dense row-major matrix of doubles; rows are samples.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw Error(ErrorCode::kDimensionMismatch, "matrix data size mismatch");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const double> values) {
    if (rows_ == 0 && cols_ == 0) cols_ = values.size();
    if (values.size() != cols_) throw Error(ErrorCode::kDimensionMismatch, "row width mismatch");
    data_.insert(data_.end(), values.begin(), values.end());
    ++rows_;
  }

  /// Rows selected by index, in the given order.
  Matrix select_rows(std::span<const std::size_t> indices) const {
    Matrix out(indices.size(), cols_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      const auto src = row(indices[i]);
      std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
  }

  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline void check_training_shape(const Matrix& x, std::span<const double> y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature rows (" + std::to_string(x.rows()) + ") != targets (" + std::to_string(y.size()) + ")");
  }
  if (y.size() < 2) throw Error(ErrorCode::kTooFewSamples, "need at least two training rows");
  if (x.cols() == 0) throw Error(ErrorCode::kDimensionMismatch, "no feature columns");
}

}  // namespace peerlens::estimator
