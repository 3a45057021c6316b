#pragma once

namespace peerlens {

/// Selects between a kernel's OpenMP path and its serial reference. Both
/// paths produce bit-identical results; the serial one exists for testing
/// and benchmarking.
enum class Exec { kSerial, kParallel };

}  // namespace peerlens
