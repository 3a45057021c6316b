#include "peerlens/agreement/kendall.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "peerlens/error.hpp"

namespace peerlens::agreement {
namespace {

using Count = std::int64_t;

Count pairs(Count t) { return t * (t - 1) / 2; }

// Stable merge sort of `v` counting inversions (pairs i < j with v[i] > v[j]).
Count sort_count_inversions(std::vector<double>& v, std::vector<double>& buf) {
  const std::size_t n = v.size();
  Count swaps = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<Count>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    std::swap(v, buf);
  }
  return swaps;
}

}  // namespace

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "paired scores differ in length (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  }
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorCode::kTooFewSamples, "Kendall tau needs at least two pairs");
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) throw Error(ErrorCode::kInvalidArgument, "NaN in paired scores");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  // Ties in x (n1) and joint ties (n3) from runs in the (x, y) order.
  Count n1 = 0, n3 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && x[order[j]] == x[order[i]]) ++j;
    n1 += pairs(static_cast<Count>(j - i));
    for (std::size_t a = i; a < j;) {
      std::size_t b = a + 1;
      while (b < j && y[order[b]] == y[order[a]]) ++b;
      n3 += pairs(static_cast<Count>(b - a));
      a = b;
    }
    i = j;
  }

  std::vector<double> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const Count swaps = sort_count_inversions(ys, buf);

  Count n2 = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && ys[j] == ys[i]) ++j;
    n2 += pairs(static_cast<Count>(j - i));
    i = j;
  }

  const Count n0 = pairs(static_cast<Count>(n));
  const Count ax = n0 - n1;
  const Count ay = n0 - n2;
  if (ax == 0 || ay == 0) {
    throw Error(ErrorCode::kDegenerateInput, "Kendall tau_b is undefined when a score list is constant");
  }
  // C − D = (pairs untied in both) − 2·D, with D the inversion count.
  const Count s = n0 - n1 - n2 + n3 - 2 * swaps;
  return static_cast<double>(s) / std::sqrt(static_cast<double>(ax) * static_cast<double>(ay));
}

}  // namespace peerlens::agreement
