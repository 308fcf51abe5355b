#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tailsort/key.hpp"
#include "tailsort/rng.hpp"

// Balls-into-bins occupancy vectors and the statistics that drive the inner
// cost of the two Bucket Sort variants: f = sum B_j^2, g = sum B_j log2 B_j,
// the suffix counts |S_i| = #{buckets with >= i keys}, and the per-level
// expectation bound E_i = (e/i)^i.

namespace tailsort {

struct OccupancyVector {
  std::vector<std::uint32_t> counts;

  std::size_t size() const noexcept { return counts.size(); }
  std::uint64_t total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  }
};

/// Occupancy vector of n keys over n buckets, B_j = #{i : bucket_of(x_i) = j}.
inline OccupancyVector bucketize(const std::vector<Key>& keys) {
  const std::size_t n = keys.size();
  OccupancyVector b;
  b.counts.assign(n, 0);
  for (Key x : keys) ++b.counts[bucket_of(x, n)];
  return b;
}

/// n independent uniform bin choices among n bins.
inline OccupancyVector sample_occupancy(std::size_t n, Rng& rng) {
  OccupancyVector b;
  b.counts.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++b.counts[rng.next_below(n)];
  return b;
}

/// f(b) = sum_j B_j^2.
inline std::uint64_t f_stat(const OccupancyVector& b) noexcept {
  std::uint64_t s = 0;
  for (std::uint32_t c : b.counts) s += std::uint64_t{c} * c;
  return s;
}

/// g(b) = sum_{B_j > 0} B_j * log2(B_j). Empty and singleton bins contribute 0.
inline double g_stat(const OccupancyVector& b) noexcept {
  double s = 0.0;
  for (std::uint32_t c : b.counts)
    if (c > 1) s += static_cast<double>(c) * std::log2(static_cast<double>(c));
  return s;
}

/// |S_i| for i = 1..n, where S_i is the set of bins with occupancy >= i.
/// Computed as a suffix sum of the occupancy histogram, O(n).
inline std::vector<std::uint64_t> s_counts(const OccupancyVector& b) {
  const std::size_t n = b.size();
  std::vector<std::uint64_t> hist(n + 2, 0);
  for (std::uint32_t c : b.counts) {
    assert(c <= n);
    ++hist[c];
  }
  std::vector<std::uint64_t> s(n, 0);
  std::uint64_t suffix = 0;
  for (std::size_t i = n; i >= 1; --i) {
    suffix += hist[i];
    s[i - 1] = suffix;  // s[i-1] holds |S_i|
  }
  return s;
}

/// E_i = (e/i)^i, evaluated as exp(i * (1 - ln i)) so large i underflows
/// gracefully instead of overflowing the intermediate power.
inline double e_bound(std::uint64_t i) noexcept {
  assert(i >= 1);
  return std::exp(static_cast<double>(i) *
                  (1.0 - std::log(static_cast<double>(i))));
}

}  // namespace tailsort
