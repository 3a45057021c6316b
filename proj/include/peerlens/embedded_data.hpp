#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace peerlens::embedded {

struct EmbeddedFile {
  std::string_view path;  // relative to data/
  std::string_view content;
};

std::span<const EmbeddedFile> files();

inline std::optional<std::string_view> find(std::string_view path) {
  for (const auto& f : files()) {
    if (f.path == path) return f.content;
  }
  return std::nullopt;
}

}  // namespace peerlens::embedded
