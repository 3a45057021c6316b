#include "peerlens/agreement/cross_validation.hpp"

#include <exception>
#include <numeric>
#include <string>

#include "peerlens/agreement/kendall.hpp"
#include "peerlens/rng.hpp"

namespace peerlens::agreement {

std::vector<std::vector<std::size_t>> fold_assignment(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::kInvalidArgument, "cross-validation needs k >= 2");
  if (n < 2 * k) {
    throw Error(ErrorCode::kTooFewSamples, std::to_string(n) + " samples cannot fill " + std::to_string(k) +
                                               " folds of at least two samples each");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<std::vector<std::size_t>> folds(k);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

nlohmann::json CvReport::to_json() const {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& t : per_fold) folds.push_back(t ? nlohmann::json(*t) : nlohmann::json(nullptr));
  return {{"model", estimator::kind_name(model)},
          {"k", k},
          {"seed", seed},
          {"per_fold", folds},
          {"mean_tau", mean_tau},
          {"tau_variant", "tau_b"}};
}

CvReport cross_validate(const estimator::Matrix& x, std::span<const double> y, estimator::ModelKind kind,
                        const estimator::TrainOptions& options, std::size_t k, std::uint64_t seed, Exec exec) {
  estimator::check_training_shape(x, y);
  const auto folds = fold_assignment(y.size(), k, seed);

  CvReport report;
  report.model = kind;
  report.k = k;
  report.seed = seed;
  report.per_fold.resize(k);
  std::vector<std::exception_ptr> errors(k);

  auto run_fold = [&](std::size_t f) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < k; ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    std::vector<double> train_y(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) train_y[i] = y[train[i]];
    estimator::TrainOptions fold_opt = options;
    if (exec == Exec::kParallel) fold_opt.exec = Exec::kSerial;
    try {
      const auto model = estimator::fit_model(kind, x.select_rows(train), train_y, fold_opt);
      std::vector<double> predicted, actual;
      for (std::size_t i : folds[f]) {
        predicted.push_back(estimator::predict_row(model, x.row(i)));
        actual.push_back(y[i]);
      }
      report.per_fold[f] = kendall_tau_b(predicted, actual);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateInput) errors[f] = std::current_exception();
    } catch (...) {
      errors[f] = std::current_exception();
    }
  };

  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(k); ++f) run_fold(static_cast<std::size_t>(f));
  } else {
    for (std::size_t f = 0; f < k; ++f) run_fold(f);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  double sum = 0.0;
  std::size_t defined = 0;
  for (const auto& t : report.per_fold) {
    if (t) {
      sum += *t;
      ++defined;
    }
  }
  if (defined == 0) throw Error(ErrorCode::kDegenerateInput, "no fold produced a defined Kendall tau_b");
  report.mean_tau = sum / static_cast<double>(defined);
  return report;
}

}  // namespace peerlens::agreement
