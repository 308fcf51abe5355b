#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tailsort/occupancy.hpp"
#include "tailsort/rng.hpp"

// Random infinite binary strings, minimal k-prefixes, excess path lengths,
// depth-d node occupancy and incremental insertion traces.
//
// A string's bits are produced lazily by a counter-mode PRF of
// (seed, string index, 64-bit block), so any prefix can be regenerated or
// extended without storage. Leading bits can be pinned per string through
// forced_prefixes, which the adversarial constructions use.

namespace tailsort {

/// A common prefix ran past the configured depth cap. Under the random model
/// this has probability < n^2 * 2^-(cap - 6); hitting it indicates a bug or a
/// deliberately degenerate forced-prefix set, not bad luck.
struct DepthCapExceeded : std::runtime_error {
  DepthCapExceeded()
      : std::runtime_error("common prefix exceeds the trie depth cap") {}
};

inline constexpr std::uint32_t kDefaultDepthCap = 4096;

class StringSet {
 public:
  StringSet(std::size_t n, std::uint64_t seed,
            std::uint32_t depth_cap = kDefaultDepthCap)
      : n_(n), seed_(seed), depth_cap_(depth_cap) {
    assert(n >= 1);
    assert(depth_cap % 64 == 0);
  }

  std::size_t size() const noexcept { return n_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t depth_cap() const noexcept { return depth_cap_; }

  /// Pins the leading bits of string i to `bits` ('0'/'1' characters).
  void force_prefix(std::size_t i, std::string bits) {
    assert(i < n_);
    assert(bits.find_first_not_of("01") == std::string::npos);
    forced_[i] = std::move(bits);
  }

  const std::map<std::size_t, std::string>& forced_prefixes() const noexcept {
    return forced_;
  }

  /// Bit l of string i (0 or 1).
  int bit(std::size_t i, std::uint32_t l) const {
    auto it = forced_.find(i);
    if (it != forced_.end() && l < it->second.size())
      return it->second[l] - '0';
    return static_cast<int>((prf_word(i, l / 64) >> (63 - (l % 64))) & 1);
  }

  /// 64 bits of string i starting at position 64*block, MSB first.
  std::uint64_t word(std::size_t i, std::uint32_t block) const {
    std::uint64_t w = prf_word(i, block);
    auto it = forced_.find(i);
    if (it != forced_.end()) {
      const std::string& p = it->second;
      const std::uint64_t base = std::uint64_t{block} * 64;
      if (base < p.size()) {
        const std::size_t take = std::min<std::size_t>(64, p.size() - base);
        std::uint64_t mask =
            take == 64 ? ~std::uint64_t{0} : ~(~std::uint64_t{0} >> take);
        std::uint64_t pinned = 0;
        for (std::size_t t = 0; t < take; ++t)
          if (p[base + t] == '1') pinned |= std::uint64_t{1} << (63 - t);
        w = (w & ~mask) | pinned;
      }
    }
    return w;
  }

  nlohmann::json to_json() const {
    nlohmann::json forced = nlohmann::json::object();
    for (const auto& [i, bits] : forced_) forced[std::to_string(i)] = bits;
    return {{"n", n_},
            {"seed", seed_},
            {"depth_cap", depth_cap_},
            {"forced_prefixes", forced}};
  }

  static StringSet from_json(const nlohmann::json& j) {
    StringSet L(j.at("n").get<std::size_t>(), j.at("seed").get<std::uint64_t>(),
                j.value("depth_cap", kDefaultDepthCap));
    if (j.contains("forced_prefixes"))
      for (const auto& [key, bits] : j.at("forced_prefixes").items())
        L.force_prefix(std::stoull(key), bits.get<std::string>());
    return L;
  }

 private:
  std::uint64_t prf_word(std::size_t i, std::uint32_t block) const {
    return mix64(derive_seed(seed_, i) + kGolden * (block + 1));
  }

  std::size_t n_;
  std::uint64_t seed_;
  std::uint32_t depth_cap_;
  std::map<std::size_t, std::string> forced_;
};

/// Length of the longest common prefix of strings i and j.
inline std::uint32_t lcp(const StringSet& L, std::size_t i, std::size_t j) {
  assert(i != j);
  const std::uint32_t blocks = L.depth_cap() / 64;
  for (std::uint32_t b = 0; b < blocks; ++b) {
    const std::uint64_t x = L.word(i, b) ^ L.word(j, b);
    if (x != 0) return b * 64 + static_cast<std::uint32_t>(std::countl_zero(x));
  }
  throw DepthCapExceeded{};
}

struct PrefixLengths {
  std::vector<std::uint32_t> lengths;  // |beta_i| per string
  std::uint32_t k = 0;
};

namespace detail {

// Lexicographic order on the infinite strings; distinct within the cap.
inline bool string_less(const StringSet& L, std::size_t i, std::size_t j) {
  const std::uint32_t blocks = L.depth_cap() / 64;
  for (std::uint32_t b = 0; b < blocks; ++b) {
    const std::uint64_t wi = L.word(i, b);
    const std::uint64_t wj = L.word(j, b);
    if (wi != wj) return wi < wj;
  }
  throw DepthCapExceeded{};
}

// Indices of L sorted lexicographically.
inline std::vector<std::size_t> sorted_order(const StringSet& L) {
  std::vector<std::size_t> order(L.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&L](std::size_t a, std::size_t b) { return string_less(L, a, b); });
  return order;
}

}  // namespace detail

/// Minimal k-prefix lengths: |beta_i| = max(k, 1 + max_{j != i} lcp(i, j)),
/// with the convention that a lone string needs one bit when k = 0 (the empty
/// prefix is not a valid leaf). The max-lcp of each string is attained at one
/// of its two lexicographic neighbors, so one sort suffices.
inline PrefixLengths minimal_prefix_lengths(const StringSet& L,
                                            std::uint32_t k) {
  const std::size_t n = L.size();
  PrefixLengths out;
  out.k = k;
  out.lengths.assign(n, std::max<std::uint32_t>(k, 1));
  if (n == 1) return out;
  const auto order = detail::sorted_order(L);
  std::vector<std::uint32_t> max_lcp(n, 0);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const std::uint32_t l = lcp(L, order[t], order[t + 1]);
    max_lcp[order[t]] = std::max(max_lcp[order[t]], l);
    max_lcp[order[t + 1]] = std::max(max_lcp[order[t + 1]], l);
  }
  for (std::size_t i = 0; i < n; ++i)
    out.lengths[i] = std::max(k, max_lcp[i] + 1);
  return out;
}

/// p_k(L) = sum_i (|beta_i| - k). k = ceil(log2 n) gives the excess path
/// length, k = 0 the nonvoid external path length.
inline std::uint64_t excess_path_length(const StringSet& L, std::uint32_t k) {
  const auto pl = minimal_prefix_lengths(L, k);
  std::uint64_t s = 0;
  for (std::uint32_t len : pl.lengths) s += len - k;
  return s;
}

inline std::uint32_t ceil_log2(std::size_t n) noexcept {
  return n <= 1 ? 0 : 64 - static_cast<std::uint32_t>(
                               std::countl_zero(std::uint64_t{n} - 1));
}

/// Occupancy of the 2^d depth-d trie nodes: C_j counts the strings whose
/// d-bit prefix encodes j.
inline OccupancyVector node_occupancy(const StringSet& L, std::uint32_t d) {
  assert(d < 64);
  OccupancyVector c;
  c.counts.assign(std::size_t{1} << d, 0);
  for (std::size_t i = 0; i < L.size(); ++i) {
    const std::size_t j = d == 0 ? 0 : L.word(i, 0) >> (64 - d);
    ++c.counts[j];
  }
  return c;
}

struct DeltaTrace {
  std::vector<std::uint64_t> deltas;  // deltas[i] = p_k(L^(i+1)) - p_k(L^(i))

  std::uint64_t sum() const noexcept {
    return std::accumulate(deltas.begin(), deltas.end(), std::uint64_t{0});
  }
};

/// Incremental trace of p_k as strings are inserted one by one. Inserting a
/// string extends at most one existing prefix: the unique colliding
/// predecessor, which is its max-lcp lexicographic neighbor.
inline DeltaTrace delta_trace(const StringSet& L, std::uint32_t k) {
  const std::size_t n = L.size();
  DeltaTrace trace;
  trace.deltas.reserve(n);

  std::vector<std::size_t> order;   // current strings, sorted
  std::vector<std::uint32_t> len(n, 0);
  order.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (order.empty()) {
      len[i] = std::max<std::uint32_t>(k, 1);
      order.push_back(i);
      trace.deltas.push_back(len[i] - k);
      continue;
    }
    const auto pos = std::lower_bound(
        order.begin(), order.end(), i,
        [&L](std::size_t a, std::size_t b) {
          return detail::string_less(L, a, b);
        });
    std::uint64_t delta = 0;
    std::uint32_t max_l = 0;
    std::size_t collider = n;  // n = none
    if (pos != order.begin()) {
      const std::uint32_t l = lcp(L, *(pos - 1), i);
      if (l >= max_l) {
        max_l = l;
        collider = *(pos - 1);
      }
    }
    if (pos != order.end()) {
      const std::uint32_t l = lcp(L, *pos, i);
      if (l >= max_l) {
        max_l = l;
        collider = *pos;
      }
    }
    len[i] = std::max(k, max_l + 1);
    delta += len[i] - k;
    if (collider != n && max_l + 1 > len[collider]) {
      delta += (max_l + 1) - len[collider];
      len[collider] = max_l + 1;
    }
    order.insert(pos, i);
    trace.deltas.push_back(delta);
  }
  return trace;
}

/// Appendix-A style construction: strings 0 and 1 share a forced common
/// prefix of length ceil((c/2 + 1) * n) and then differ; all remaining
/// strings (and all tails) stay random.
inline StringSet adversarial_shared_prefix(std::size_t n, double c,
                                           std::uint64_t seed) {
  assert(n >= 2 && c > 0);
  StringSet L(n, seed);
  const auto shared = static_cast<std::size_t>(
      std::ceil((c / 2.0 + 1.0) * static_cast<double>(n)));
  std::string prefix;
  prefix.reserve(shared + 1);
  Rng rng(derive_seed(seed, 0x5ea1));
  for (std::size_t t = 0; t < shared; ++t)
    prefix.push_back(rng.next() & 1 ? '1' : '0');
  L.force_prefix(0, prefix + '0');
  L.force_prefix(1, prefix + '1');
  return L;
}

}  // namespace tailsort
