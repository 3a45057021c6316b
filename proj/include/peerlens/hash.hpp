#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace peerlens {

/// 64-bit FNV-1a. Used for lexicon/rubric fingerprints and model checksums,
/// never for anything security-relevant.
class Fnv1a64 {
 public:
  void update(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t digest() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  Fnv1a64 h;
  h.update(bytes);
  return h.digest();
}

std::string to_hex(std::uint64_t value);

}  // namespace peerlens
