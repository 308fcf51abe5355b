#pragma once

#include <cassert>
#include <compare>
#include <cstdint>

#include "tailsort/rng.hpp"

namespace tailsort {

/// A key in [0, 1), stored as a 64-bit binary fraction value = frac / 2^64.
struct Key {
  std::uint64_t frac = 0;

  double value() const noexcept { return frac * 0x1.0p-64; }

  static Key from_double(double v) noexcept {
    assert(v >= 0.0 && v < 1.0);
    return Key{static_cast<std::uint64_t>(v * 0x1.0p64)};
  }

  auto operator<=>(const Key&) const = default;
};

inline Key random_key(Rng& rng) noexcept { return Key{rng.next()}; }

/// Bucket of key x among n buckets: floor(value * n), i.e. the index j with
/// value in [j/n, (j+1)/n). Exact in integer arithmetic; the clamp only
/// guards against a hypothetical rounding slip at the upper edge.
inline std::size_t bucket_of(Key x, std::size_t n) noexcept {
  auto j = static_cast<std::size_t>(
      (static_cast<__uint128_t>(x.frac) * n) >> 64);
  return j < n ? j : n - 1;
}

}  // namespace tailsort
