#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "peerlens/estimator/matrix.hpp"
#include "peerlens/kernels/exec.hpp"

namespace peerlens::estimator {

enum class Activation { kRelu, kTanh };

struct MlpConfig {
  std::size_t hidden = 16;
  Activation activation = Activation::kRelu;
  double learning_rate = 0.01;
  std::size_t epochs = 2000;
  std::uint64_t seed = 0;
};

/// inputs -> hidden (activation) -> scalar. w1 is hidden x inputs, row-major.
struct MlpParams {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  Activation activation = Activation::kRelu;
  std::vector<double> w1;
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;

  /// All parameters flattened as w1, b1, w2, b2.
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  std::size_t parameter_count() const noexcept { return hidden * inputs + 2 * hidden + 1; }

  bool operator==(const MlpParams&) const = default;
};

/// Uniform weights and biases in ±1/√fan_in from a seeded generator.
MlpParams mlp_init(std::size_t inputs, std::size_t hidden, Activation activation, std::uint64_t seed);

double mlp_forward(const MlpParams& p, std::span<const double> x);

struct LossGradient {
  double loss = 0.0;          // mean squared error
  std::vector<double> grad;   // flattened like MlpParams::flatten
};

/// Mean-squared-error loss and its exact gradient by backpropagation.
/// Samples are reduced in fixed-size blocks in a fixed order, so the parallel
/// and serial paths agree bit for bit.
LossGradient mlp_loss_gradient(const MlpParams& p, const Matrix& x, std::span<const double> y,
                               Exec exec = Exec::kParallel);

struct MlpFit {
  MlpParams params;
  std::vector<double> loss_history;  // one entry per epoch, before the update
};

/// Full-batch gradient descent. Throws NonFiniteLoss on divergence.
MlpFit fit_mlp_params(const Matrix& standardized, std::span<const double> y, const MlpConfig& config,
                      Exec exec = Exec::kParallel);

}  // namespace peerlens::estimator
