#include "peerlens/estimator/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace peerlens::estimator {
namespace {

constexpr double kTieTolerance = 1e-12;

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double sse = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> y, const ForestConfig& cfg, Rng& rng)
      : x_(x), y_(y), cfg_(cfg), rng_(rng), mtry_(features_per_node(cfg, x.cols())) {}

  RegressionTree build(std::vector<std::size_t> samples) {
    grow(std::move(samples), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> samples, std::size_t depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double sum = 0.0, sumsq = 0.0;
    for (auto i : samples) {
      sum += y_[i];
      sumsq += y_[i] * y_[i];
    }
    const double n = static_cast<double>(samples.size());
    tree_.nodes[id].value = sum / n;

    const bool pure = std::all_of(samples.begin(), samples.end(), [&](std::size_t i) { return y_[i] == y_[samples[0]]; });
    if (depth >= cfg_.max_depth || samples.size() < 2 * cfg_.min_leaf || pure) return id;

    const Split best = find_split(samples, sumsq - sum * sum / n);
    if (!best.found) return id;

    std::vector<std::size_t> left, right;
    for (auto i : samples) (x_(i, best.feature) <= best.threshold ? left : right).push_back(i);
    samples.clear();
    samples.shrink_to_fit();
    tree_.nodes[id].feature = best.feature;
    tree_.nodes[id].threshold = best.threshold;
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  std::vector<std::size_t> draw_features() {
    std::vector<std::size_t> all(x_.cols());
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t k = 0; k < mtry_; ++k) {
      std::swap(all[k], all[k + rng_.below(all.size() - k)]);
    }
    all.resize(mtry_);
    std::sort(all.begin(), all.end());
    return all;
  }

  Split find_split(const std::vector<std::size_t>& samples, double parent_sse) {
    Split best;
    best.sse = parent_sse;
    // Running sums round differently per feature ordering; the same partition
    // reached through two features must still tie.
    const double tie = kTieTolerance * parent_sse;
    const std::size_t n = samples.size();
    std::vector<std::pair<double, double>> column(n);
    for (std::size_t f : draw_features()) {
      for (std::size_t k = 0; k < n; ++k) column[k] = {x_(samples[k], f), y_[samples[k]]};
      std::sort(column.begin(), column.end());
      double total = 0.0, total_sq = 0.0;
      for (const auto& [_, v] : column) {
        total += v;
        total_sq += v * v;
      }
      double ls = 0.0, lsq = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        ls += column[k].second;
        lsq += column[k].second * column[k].second;
        const std::size_t nl = k + 1;
        const std::size_t nr = n - nl;
        if (nl < cfg_.min_leaf) continue;
        if (nr < cfg_.min_leaf) break;
        const double a = column[k].first;
        const double b = column[k + 1].first;
        if (!(a < b)) continue;
        const double rs = total - ls;
        const double rsq = total_sq - lsq;
        const double sse = (lsq - ls * ls / static_cast<double>(nl)) + (rsq - rs * rs / static_cast<double>(nr));
        if (sse < best.sse - tie) {
          double t = 0.5 * (a + b);
          if (!(t < b)) t = a;
          best = {true, static_cast<int>(f), t, sse};
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const double> y_;
  const ForestConfig& cfg_;
  Rng& rng_;
  std::size_t mtry_;
  RegressionTree tree_;
};

}  // namespace

double RegressionTree::predict(std::span<const double> x) const {
  int id = 0;
  while (!nodes[id].is_leaf()) {
    const auto& n = nodes[id];
    id = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[id].value;
}

std::size_t features_per_node(const ForestConfig& config, std::size_t d) {
  const auto m = static_cast<std::size_t>(std::floor(config.feature_fraction * static_cast<double>(d)));
  return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(d, 1));
}

RegressionTree grow_tree(const Matrix& x, std::span<const double> y, std::span<const std::size_t> samples,
                         const ForestConfig& config, Rng& rng) {
  if (samples.empty()) throw Error(ErrorCode::kTooFewSamples, "tree needs at least one sample");
  TreeBuilder builder(x, y, config, rng);
  return builder.build(std::vector<std::size_t>(samples.begin(), samples.end()));
}

double ForestParams::predict(std::span<const double> x) const {
  if (trees.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : trees) s += t.predict(x);
  return s / static_cast<double>(trees.size());
}

ForestParams fit_forest_params(const Matrix& x, std::span<const double> y, const ForestConfig& config, Exec exec) {
  check_training_shape(x, y);
  if (config.trees == 0) throw Error(ErrorCode::kInvalidArgument, "forest needs at least one tree");
  if (config.min_leaf == 0) throw Error(ErrorCode::kInvalidArgument, "min_leaf must be >= 1");
  if (!(config.feature_fraction > 0.0 && config.feature_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "feature_fraction must be in (0, 1]");
  }
  const std::size_t n = x.rows();
  ForestParams forest;
  forest.trees.resize(config.trees);

  auto grow_one = [&](std::size_t t) {
    Rng rng(splitmix64(config.seed ^ splitmix64(t)));
    std::vector<std::size_t> samples(n);
    if (config.bootstrap) {
      for (auto& s : samples) s = static_cast<std::size_t>(rng.below(n));
    } else {
      std::iota(samples.begin(), samples.end(), std::size_t{0});
    }
    forest.trees[t] = grow_tree(x, y, samples, config, rng);
  };

  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(config.trees); ++t) grow_one(static_cast<std::size_t>(t));
  } else {
    for (std::size_t t = 0; t < config.trees; ++t) grow_one(t);
  }
  return forest;
}

}  // namespace peerlens::estimator
