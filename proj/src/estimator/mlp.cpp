#include "peerlens/estimator/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "peerlens/rng.hpp"

namespace peerlens::estimator {
namespace {

constexpr std::size_t kBlock = 32;

double activate(Activation a, double v) { return a == Activation::kRelu ? (v > 0.0 ? v : 0.0) : std::tanh(v); }

double activate_grad(Activation a, double pre, double post) {
  return a == Activation::kRelu ? (pre > 0.0 ? 1.0 : 0.0) : 1.0 - post * post;
}

// Accumulates loss (sum of squared residuals) and the unnormalised-by-block
// gradient of samples [begin, end) into `acc`; acc[0] holds the loss, the
// rest the flattened gradient.
void accumulate_block(const MlpParams& p, const Matrix& x, std::span<const double> y, std::size_t begin,
                      std::size_t end, double inv_n, std::span<double> acc, std::vector<double>& pre,
                      std::vector<double>& post) {
  const std::size_t d = p.inputs;
  const std::size_t h = p.hidden;
  double* g_w1 = acc.data() + 1;
  double* g_b1 = g_w1 + h * d;
  double* g_w2 = g_b1 + h;
  double* g_b2 = g_w2 + h;
  for (std::size_t i = begin; i < end; ++i) {
    const auto xi = x.row(i);
    double out = p.b2;
    for (std::size_t j = 0; j < h; ++j) {
      double s = p.b1[j];
      const double* w = p.w1.data() + j * d;
      for (std::size_t k = 0; k < d; ++k) s += w[k] * xi[k];
      pre[j] = s;
      post[j] = activate(p.activation, s);
      out += p.w2[j] * post[j];
    }
    const double r = out - y[i];
    acc[0] += r * r;
    const double g = 2.0 * r * inv_n;
    *g_b2 += g;
    for (std::size_t j = 0; j < h; ++j) {
      g_w2[j] += g * post[j];
      const double dpre = g * p.w2[j] * activate_grad(p.activation, pre[j], post[j]);
      g_b1[j] += dpre;
      double* gw = g_w1 + j * d;
      for (std::size_t k = 0; k < d; ++k) gw[k] += dpre * xi[k];
    }
  }
}

}  // namespace

std::vector<double> MlpParams::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  out.insert(out.end(), w1.begin(), w1.end());
  out.insert(out.end(), b1.begin(), b1.end());
  out.insert(out.end(), w2.begin(), w2.end());
  out.push_back(b2);
  return out;
}

void MlpParams::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw Error(ErrorCode::kDimensionMismatch, "MLP parameter count mismatch");
  auto it = flat.begin();
  std::copy(it, it + static_cast<std::ptrdiff_t>(w1.size()), w1.begin());
  it += static_cast<std::ptrdiff_t>(w1.size());
  std::copy(it, it + static_cast<std::ptrdiff_t>(b1.size()), b1.begin());
  it += static_cast<std::ptrdiff_t>(b1.size());
  std::copy(it, it + static_cast<std::ptrdiff_t>(w2.size()), w2.begin());
  it += static_cast<std::ptrdiff_t>(w2.size());
  b2 = *it;
}

MlpParams mlp_init(std::size_t inputs, std::size_t hidden, Activation activation, std::uint64_t seed) {
  if (inputs == 0 || hidden == 0) throw Error(ErrorCode::kInvalidArgument, "MLP needs inputs and hidden units");
  MlpParams p;
  p.inputs = inputs;
  p.hidden = hidden;
  p.activation = activation;
  Rng rng(seed);
  const double b_in = 1.0 / std::sqrt(static_cast<double>(inputs));
  const double b_hidden = 1.0 / std::sqrt(static_cast<double>(hidden));
  p.w1.resize(hidden * inputs);
  for (auto& w : p.w1) w = rng.uniform(-b_in, b_in);
  p.b1.resize(hidden);
  for (auto& b : p.b1) b = rng.uniform(-b_in, b_in);
  p.w2.resize(hidden);
  for (auto& w : p.w2) w = rng.uniform(-b_hidden, b_hidden);
  p.b2 = rng.uniform(-b_hidden, b_hidden);
  return p;
}

double mlp_forward(const MlpParams& p, std::span<const double> x) {
  if (x.size() != p.inputs) throw Error(ErrorCode::kDimensionMismatch, "MLP input width mismatch");
  double out = p.b2;
  for (std::size_t j = 0; j < p.hidden; ++j) {
    double s = p.b1[j];
    for (std::size_t k = 0; k < p.inputs; ++k) s += p.w1[j * p.inputs + k] * x[k];
    out += p.w2[j] * activate(p.activation, s);
  }
  return out;
}

LossGradient mlp_loss_gradient(const MlpParams& p, const Matrix& x, std::span<const double> y, Exec exec) {
  if (x.rows() != y.size() || x.cols() != p.inputs) {
    throw Error(ErrorCode::kDimensionMismatch, "MLP batch shape mismatch");
  }
  const std::size_t n = x.rows();
  const std::size_t width = 1 + p.parameter_count();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const double inv_n = n > 0 ? 1.0 / static_cast<double>(n) : 0.0;
  std::vector<double> partial(blocks * width, 0.0);

  auto run_block = [&](std::size_t b, std::vector<double>& pre, std::vector<double>& post) {
    const std::size_t begin = b * kBlock;
    const std::size_t end = std::min(n, begin + kBlock);
    accumulate_block(p, x, y, begin, end, inv_n, std::span<double>(partial.data() + b * width, width), pre, post);
  };

  if (exec == Exec::kParallel) {
#pragma omp parallel
    {
      std::vector<double> pre(p.hidden), post(p.hidden);
#pragma omp for schedule(static)
      for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
        run_block(static_cast<std::size_t>(b), pre, post);
      }
    }
  } else {
    std::vector<double> pre(p.hidden), post(p.hidden);
    for (std::size_t b = 0; b < blocks; ++b) run_block(b, pre, post);
  }

  std::vector<double> total(width, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* src = partial.data() + b * width;
    for (std::size_t k = 0; k < width; ++k) total[k] += src[k];
  }
  LossGradient out;
  out.loss = total[0] * inv_n;
  out.grad.assign(total.begin() + 1, total.end());
  return out;
}

MlpFit fit_mlp_params(const Matrix& x, std::span<const double> y, const MlpConfig& config, Exec exec) {
  check_training_shape(x, y);
  if (!(config.learning_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "learning rate must be > 0");
  MlpFit fit;
  fit.params = mlp_init(x.cols(), config.hidden, config.activation, config.seed);
  fit.loss_history.reserve(config.epochs);
  std::vector<double> flat = fit.params.flatten();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const LossGradient lg = mlp_loss_gradient(fit.params, x, y, exec);
    bool finite = std::isfinite(lg.loss);
    for (double g : lg.grad) finite = finite && std::isfinite(g);
    if (!finite) {
      throw Error(ErrorCode::kNonFiniteLoss,
                  "MLP training diverged at epoch " + std::to_string(epoch) + " (learning rate " +
                      std::to_string(config.learning_rate) + "); lower the learning rate");
    }
    fit.loss_history.push_back(lg.loss);
    for (std::size_t k = 0; k < flat.size(); ++k) flat[k] -= config.learning_rate * lg.grad[k];
    fit.params.assign(flat);
  }
  return fit;
}

}  // namespace peerlens::estimator
