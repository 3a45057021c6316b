#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace peerlens {

enum class ErrorCode {
  kEmptyText,
  kInvalidArgument,
  kBackendError,
  kNotFound,
  kRateLimited,
  kNetworkError,
  kMalformedResponse,
  kUpstreamError,
  kMalformedJudgment,
  kScoreOutOfRange,
  kSchemaMismatch,
  kDimensionMismatch,
  kSingularSystem,
  kNonFiniteLoss,
  kIoError,
  kFormatVersionMismatch,
  kCorruptModel,
  kDegenerateInput,
  kTooFewSamples,
  kConfigError,
};

/// Stable snake_case identifier used in JSON error objects and exit diagnostics.
std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Upstream HTTP failures carry the status they saw; 429 also carries Retry-After.
class HttpError : public Error {
 public:
  HttpError(ErrorCode code, const std::string& message, int status, double retry_after_s = 0.0)
      : Error(code, message), status_(status), retry_after_s_(retry_after_s) {}

  int status() const noexcept { return status_; }
  double retry_after_seconds() const noexcept { return retry_after_s_; }

 private:
  int status_;
  double retry_after_s_;
};

}  // namespace peerlens
