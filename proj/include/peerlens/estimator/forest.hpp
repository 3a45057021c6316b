#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "peerlens/estimator/matrix.hpp"
#include "peerlens/kernels/exec.hpp"
#include "peerlens/rng.hpp"

namespace peerlens::estimator {

struct ForestConfig {
  std::size_t trees = 100;
  std::size_t max_depth = 6;
  std::size_t min_leaf = 2;
  double feature_fraction = 1.0 / 3.0;
  std::uint64_t seed = 0;
  bool bootstrap = true;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  double value = 0.0;  // mean target of the node's samples

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root, children after parents

  double predict(std::span<const double> x) const;
  bool operator==(const RegressionTree&) const = default;
};

/// Number of candidate features per node: max(1, floor(fraction * d)).
std::size_t features_per_node(const ForestConfig& config, std::size_t d);

/// Grows one CART regression tree on the given sample multiset. At each node
/// it draws the candidate features from `rng`, then takes the split with the
/// smallest summed child squared error, scanning candidates in ascending
/// feature order and thresholds in ascending order; the first minimum wins.
/// Thresholds are midpoints between consecutive distinct values. Candidates
/// within 1e-12 × the node's squared error of the incumbent count as ties.
RegressionTree grow_tree(const Matrix& x, std::span<const double> y, std::span<const std::size_t> samples,
                         const ForestConfig& config, Rng& rng);

struct ForestParams {
  std::vector<RegressionTree> trees;

  double predict(std::span<const double> x) const;
  bool operator==(const ForestParams&) const = default;
};

/// Bagged trees. Tree t uses its own generator seeded from (seed, t), so the
/// result does not depend on thread count or Exec.
ForestParams fit_forest_params(const Matrix& x, std::span<const double> y, const ForestConfig& config,
                               Exec exec = Exec::kParallel);

}  // namespace peerlens::estimator
