#pragma once

#include <cstdint>

// Counter-based pseudorandomness. Every random decision in the library is a
// pure function of a 64-bit seed, so experiments are reproducible bit-for-bit
// regardless of scheduling or thread count.

namespace tailsort {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer (Steele, Lea, Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (master, index).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t index) noexcept {
  return mix64(master + kGolden * (index + 1));
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b) noexcept {
  return derive_seed(derive_seed(master, a), b);
}

/// Small deterministic generator with unbiased bounded sampling.
class Rng {
 public:
  explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform in [0, bound) via Lemire's multiply-shift with rejection.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < bound) {
      const std::uint64_t t = -bound % bound;
      while (lo < t) {
        x = next();
        m = static_cast<__uint128_t>(x) * bound;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() noexcept { return (next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace tailsort
