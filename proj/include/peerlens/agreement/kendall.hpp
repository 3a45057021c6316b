#pragma once

#include <span>

namespace peerlens::agreement {

/// Tie-corrected Kendall rank correlation,
///   τ_b = (C − D) / √((n₀ − n₁)(n₀ − n₂)),
/// in O(n log n) via a merge-sort inversion count. Pair counts are exact
/// integers; the only rounding is the final division.
///
/// Throws DimensionMismatch for unequal lengths, TooFewSamples for n < 2,
/// InvalidArgument for NaN, DegenerateInput when either side is constant
/// (the denominator vanishes).
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

}  // namespace peerlens::agreement
