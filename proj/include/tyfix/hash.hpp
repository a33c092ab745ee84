#pragma once

#include <cstdint>
#include <string_view>

namespace tyfix {

/// 64-bit FNV-1a. Used for canonical tree hashes, so values must be stable
/// across runs and platforms.
class Fnv1a {
 public:
  void add(std::string_view s) {
    add(static_cast<std::uint64_t>(s.size()));
    for (unsigned char c : s) mix(c);
  }
  void add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(v >> (8 * i)));
  }
  std::uint64_t value() const { return state_; }

 private:
  void mix(unsigned char c) {
    state_ ^= c;
    state_ *= 1099511628211ULL;
  }
  std::uint64_t state_ = 14695981039346656037ULL;
};

}  // namespace tyfix
