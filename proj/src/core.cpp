#include <array>
#include <cstdio>

#include "peerlens/error.hpp"
#include "peerlens/hash.hpp"

namespace peerlens {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kEmptyText: return "empty_text";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kBackendError: return "backend_error";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kRateLimited: return "rate_limited";
    case ErrorCode::kNetworkError: return "network_error";
    case ErrorCode::kMalformedResponse: return "malformed_response";
    case ErrorCode::kUpstreamError: return "upstream_error";
    case ErrorCode::kMalformedJudgment: return "malformed_judgment";
    case ErrorCode::kScoreOutOfRange: return "score_out_of_range";
    case ErrorCode::kSchemaMismatch: return "schema_mismatch";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kSingularSystem: return "singular_system";
    case ErrorCode::kNonFiniteLoss: return "non_finite_loss";
    case ErrorCode::kIoError: return "io_error";
    case ErrorCode::kFormatVersionMismatch: return "format_version_mismatch";
    case ErrorCode::kCorruptModel: return "corrupt_model";
    case ErrorCode::kDegenerateInput: return "degenerate_input";
    case ErrorCode::kTooFewSamples: return "too_few_samples";
    case ErrorCode::kConfigError: return "config_error";
  }
  return "unknown";
}

std::string to_hex(std::uint64_t value) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf.data(), 16);
}

}  // namespace peerlens
