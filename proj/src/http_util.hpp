#pragma once

// Internal helpers shared by the HTTP-backed clients. Not installed.

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include <httplib.h>

namespace peerlens::detail {

struct SplitUrl {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // without trailing slash, may be empty
};

/// Splits "https://api.example.org/base/" into origin and path prefix.
/// Throws Error{kConfigError} on anything that is not http(s).
SplitUrl split_url(std::string_view url);

std::unique_ptr<httplib::Client> make_client(const std::string& origin, std::chrono::seconds timeout);

/// Percent-encodes a query-string component.
std::string url_encode(std::string_view s);

}  // namespace peerlens::detail
