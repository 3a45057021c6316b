// Serial reference vs OpenMP for the parallel kernels. Run with
// OMP_NUM_THREADS set to compare thread counts; Arg(0) is serial, Arg(1)
// parallel.

#include <benchmark/benchmark.h>

#include "peerlens/agreement/cross_validation.hpp"
#include "peerlens/estimator/model.hpp"
#include "peerlens/kernels/batch_metrics.hpp"
#include "peerlens/rng.hpp"

using namespace peerlens;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::kSerial : Exec::kParallel; }

struct Problem {
  estimator::Matrix x;
  std::vector<double> y;
};

Problem problem(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Problem p{estimator::Matrix(n, d), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      p.x(i, j) = rng.uniform(-1.0, 1.0);
      s += (j % 3 == 0 ? 1.0 : -0.5) * p.x(i, j);
    }
    p.y[i] = s + rng.uniform(-0.1, 0.1);
  }
  return p;
}

std::string words(Rng& rng, std::size_t n) {
  static const char* vocab[] = {"the", "model", "may", "clearly", "Table", "Section", "weak", "novel", "results",
                                "please", "why", "baseline", "graph", "dataset", "unclear", "suggest"};
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    out += vocab[rng.below(16)];
    out += rng.below(8) == 0 ? ". " : " ";
  }
  return out + "Why?";
}

void BM_MlpGradient(benchmark::State& state) {
  const auto p = problem(4096, estimator::kFeatureCount, 1);
  const auto params = estimator::mlp_init(estimator::kFeatureCount, 32, estimator::Activation::kRelu, 2);
  for (auto _ : state) benchmark::DoNotOptimize(estimator::mlp_loss_gradient(params, p.x, p.y, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_MlpGradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ForestFit(benchmark::State& state) {
  const auto p = problem(2000, estimator::kFeatureCount, 3);
  estimator::ForestConfig cfg;
  cfg.trees = 32;
  for (auto _ : state) benchmark::DoNotOptimize(estimator::fit_forest_params(p.x, p.y, cfg, exec_of(state)));
}
BENCHMARK(BM_ForestFit)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MetricsBatch(benchmark::State& state) {
  Rng rng(4);
  std::vector<std::string> reviews, papers;
  for (int i = 0; i < 2000; ++i) {
    reviews.push_back(words(rng, 250));
    papers.push_back(words(rng, 120));
  }
  std::vector<kernels::MetricsJob> jobs;
  for (std::size_t i = 0; i < reviews.size(); ++i) jobs.push_back({reviews[i], papers[i]});
  const text::TextMetrics metrics;
  for (auto _ : state) benchmark::DoNotOptimize(kernels::compute_metrics_batch(metrics, jobs, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(jobs.size()));
}
BENCHMARK(BM_MetricsBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CrossValidation(benchmark::State& state) {
  const auto p = problem(1000, estimator::kFeatureCount, 5);
  estimator::TrainOptions options;
  options.forest.trees = 16;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        agreement::cross_validate(p.x, p.y, estimator::ModelKind::kForest, options, 10, 6, exec_of(state)));
  }
}
BENCHMARK(BM_CrossValidation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
