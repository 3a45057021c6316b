#include "http_util.hpp"

#include <cstdio>

#include "peerlens/error.hpp"

namespace peerlens::detail {

SplitUrl split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::kConfigError, "URL lacks a scheme: " + std::string(url));
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::kConfigError, "unsupported URL scheme: " + std::string(url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string_view::npos) {
    out.origin = std::string(url);
  } else {
    out.origin = std::string(url.substr(0, path_start));
    out.path_prefix = std::string(url.substr(path_start));
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
  }
  return out;
}

std::unique_ptr<httplib::Client> make_client(const std::string& origin, std::chrono::seconds timeout) {
  auto client = std::make_unique<httplib::Client>(origin);
  client->set_connection_timeout(std::chrono::seconds(10));
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);
  client->set_follow_location(true);
  return client;
}

std::string url_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

}  // namespace peerlens::detail
