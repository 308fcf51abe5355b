#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "tailsort/key.hpp"
#include "tailsort/occupancy.hpp"
#include "tailsort/rng.hpp"

// Deterministic sorts with exact operation accounting. The cost unit
// convention: 1 per key comparison, 1 per element write. The distribution and
// scan phases of Bucket Sort cost exactly 2n moves combined.

namespace tailsort {

struct CostReport {
  std::uint64_t comparisons = 0;
  std::uint64_t moves = 0;

  std::uint64_t total_units() const noexcept { return comparisons + moves; }

  CostReport& operator+=(const CostReport& o) noexcept {
    comparisons += o.comparisons;
    moves += o.moves;
    return *this;
  }
};

namespace detail {

// Stable in-place insertion sort on [first, last) of a vector.
// One comparison per probe of the scanned prefix; one move per element write.
template <typename T, typename Less>
void insertion_sort_range(std::vector<T>& a, std::size_t first,
                          std::size_t last, Less less, CostReport& cost) {
  for (std::size_t i = first + 1; i < last; ++i) {
    T key = std::move(a[i]);
    std::size_t j = i;
    while (j > first) {
      ++cost.comparisons;
      if (!less(key, a[j - 1])) break;
      a[j] = std::move(a[j - 1]);
      ++cost.moves;
      --j;
    }
    a[j] = std::move(key);
    ++cost.moves;
  }
}

// Top-down merge sort with exact midpoint split; merge is stable (takes from
// the left run on ties). Each element write, into scratch or back, is a move.
template <typename T, typename Less>
void merge_sort_range(std::vector<T>& a, std::size_t first, std::size_t last,
                      std::vector<T>& scratch, Less less, CostReport& cost) {
  if (last - first < 2) return;
  const std::size_t mid = first + (last - first) / 2;
  merge_sort_range(a, first, mid, scratch, less, cost);
  merge_sort_range(a, mid, last, scratch, less, cost);
  scratch.clear();
  std::size_t i = first, j = mid;
  while (i < mid && j < last) {
    ++cost.comparisons;
    if (less(a[j], a[i])) {
      scratch.push_back(std::move(a[j++]));
    } else {
      scratch.push_back(std::move(a[i++]));
    }
    ++cost.moves;
  }
  while (i < mid) {
    scratch.push_back(std::move(a[i++]));
    ++cost.moves;
  }
  while (j < last) {
    scratch.push_back(std::move(a[j++]));
    ++cost.moves;
  }
  for (std::size_t t = 0; t < scratch.size(); ++t) {
    a[first + t] = std::move(scratch[t]);
    ++cost.moves;
  }
}

}  // namespace detail

template <typename T, typename Less = std::less<T>>
std::pair<std::vector<T>, CostReport> insertion_sort(std::vector<T> keys,
                                                     Less less = Less{}) {
  CostReport cost;
  detail::insertion_sort_range(keys, 0, keys.size(), less, cost);
  return {std::move(keys), cost};
}

template <typename T, typename Less = std::less<T>>
std::pair<std::vector<T>, CostReport> merge_sort(std::vector<T> keys,
                                                 Less less = Less{}) {
  CostReport cost;
  std::vector<T> scratch;
  scratch.reserve(keys.size());
  detail::merge_sort_range(keys, 0, keys.size(), scratch, less, cost);
  return {std::move(keys), cost};
}

enum class BucketVariant { b2, blogb };

struct BucketSortResult {
  std::vector<Key> sorted;
  CostReport cost;
  OccupancyVector occupancy;
};

/// Bucket Sort over n = keys.size() buckets. The b2 variant sorts each bucket
/// with insertion sort, blogb with merge sort.
inline BucketSortResult bucket_sort(const std::vector<Key>& keys,
                                    BucketVariant variant) {
  const std::size_t n = keys.size();
  assert(n >= 1);
  BucketSortResult r;
  std::vector<std::vector<Key>> buckets(n);
  for (Key x : keys) {
    buckets[bucket_of(x, n)].push_back(x);
    ++r.cost.moves;  // distribution: one write per key
  }
  r.occupancy.counts.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    r.occupancy.counts[j] = static_cast<std::uint32_t>(buckets[j].size());

  std::vector<Key> scratch;
  for (auto& bucket : buckets) {
    if (variant == BucketVariant::b2) {
      detail::insertion_sort_range(bucket, 0, bucket.size(), std::less<Key>{},
                                   r.cost);
    } else {
      detail::merge_sort_range(bucket, 0, bucket.size(), scratch,
                               std::less<Key>{}, r.cost);
    }
  }
  r.sorted.reserve(n);
  for (const auto& bucket : buckets) {
    for (Key x : bucket) {
      r.sorted.push_back(x);
      ++r.cost.moves;  // scan: one write per key
    }
  }
  return r;
}

/// Occupancy of the 2^depth nodes at a given depth of the Quick Sort
/// recursion tree. Pivots stay at internal nodes, so
///   sum(counts) + #pivots consumed above `depth` == n.
struct RecursionOccupancy {
  std::uint32_t depth = 0;
  std::vector<std::uint32_t> counts;  // 2^depth entries, 0 for absent subtrees
};

struct QuickSortResult {
  std::vector<Key> sorted;
  CostReport cost;
  RecursionOccupancy occupancy;
};

namespace detail {

inline void quick_sort_rec(std::vector<Key>& list, Rng& rng,
                           std::uint32_t depth, std::size_t pos,
                           QuickSortResult& out) {
  if (depth == out.occupancy.depth)
    out.occupancy.counts[pos] += static_cast<std::uint32_t>(list.size());
  if (list.empty()) return;
  const Key pivot = list[rng.next_below(list.size())];
  std::vector<Key> smaller, greater;
  for (Key x : list) {
    if (x < pivot) {
      smaller.push_back(x);
      ++out.cost.comparisons;
      ++out.cost.moves;
    } else if (pivot < x) {
      greater.push_back(x);
      ++out.cost.comparisons;
      ++out.cost.moves;
    }
    // the pivot itself is recognized without a comparison: n-1 per call
  }
  list.clear();
  const std::size_t left = depth < out.occupancy.depth ? 2 * pos : pos;
  const std::size_t right = depth < out.occupancy.depth ? 2 * pos + 1 : pos;
  quick_sort_rec(smaller, rng, depth + 1, left, out);
  out.sorted.push_back(pivot);
  ++out.cost.moves;
  quick_sort_rec(greater, rng, depth + 1, right, out);
}

}  // namespace detail

/// Randomized Quick Sort on distinct keys: uniform pivot, recursion on the
/// strictly-smaller and strictly-greater subsets, n-1 comparisons per call.
/// Records the sizes of the sublists routed to each depth-d recursion node.
inline QuickSortResult quick_sort_random(const std::vector<Key>& keys,
                                         std::uint64_t rng_seed,
                                         std::uint32_t occupancy_depth = 0) {
  QuickSortResult r;
  r.occupancy.depth = occupancy_depth;
  r.occupancy.counts.assign(std::size_t{1} << occupancy_depth, 0);
  r.sorted.reserve(keys.size());
  Rng rng(rng_seed);
  std::vector<Key> list = keys;
  detail::quick_sort_rec(list, rng, 0, 0, r);
  return r;
}

}  // namespace tailsort
