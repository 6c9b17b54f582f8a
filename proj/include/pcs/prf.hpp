#pragma once

#include <cstdint>
#include <string_view>

namespace pcs {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Keyed pseudorandom function. Every hash, coin and level in the library
/// comes from here so a run is a pure function of its master seed.
constexpr std::uint64_t prf(std::uint64_t key, std::uint64_t input) {
  return mix64(mix64(input ^ 0x243f6a8885a308d3ULL) ^ mix64(key + 0x13198a2e03707344ULL));
}

constexpr std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) {
  return prf(seed, fnv1a(tag));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return prf(seed ^ 0xa4093822299f31d0ULL, index);
}

/// Maps 64 random bits to a double uniform on [0, 1).
constexpr double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Key for an unordered vertex pair.
constexpr std::uint64_t pair_key(std::uint32_t u, std::uint32_t v) {
  if (u > v) {
    auto t = u;
    u = v;
    v = t;
  }
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

/// Small counter-based generator on top of mix64. Unlike the standard
/// library distributions its output is fixed across platforms.
class SplitMix {
 public:
  explicit constexpr SplitMix(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }
  /// Uniform on [0, bound) by rejection; bound must be positive.
  constexpr std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }
  constexpr double unit() { return to_unit_interval(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace pcs
