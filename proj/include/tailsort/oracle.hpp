#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

// Exact small-n oracle for the distribution of f over uniform occupancy
// vectors, by dynamic programming over buckets with exact rational weights.

namespace tailsort {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct SizeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMaxExactN = 12;

struct ExactDistribution {
  std::size_t n = 0;
  std::map<std::uint64_t, BigRational> support;  // f value -> probability

  BigRational mean() const {
    BigRational m = 0;
    for (const auto& [value, prob] : support) m += BigRational(value) * prob;
    return m;
  }

  /// Pr[f >= threshold].
  BigRational upper_tail(std::uint64_t threshold) const {
    BigRational t = 0;
    for (const auto& [value, prob] : support)
      if (value >= threshold) t += prob;
    return t;
  }
};

/// Exact distribution of f(b(X)) for n uniform keys over n buckets.
/// DP over buckets j = 0..n-1 with state (balls remaining, partial f);
/// placing b balls into the next bucket contributes C(remaining, b) ways,
/// which sums the multinomial n!/prod(B_j!) over all occupancy vectors.
/// Probabilities are the exact counts over n^n.
inline ExactDistribution exact_f_distribution(std::size_t n) {
  if (n < 1 || n > kMaxExactN)
    throw SizeError("exact_f_distribution supports 1 <= n <= 12");

  // Pascal triangle up to n.
  std::vector<std::vector<BigInt>> choose(n + 1, std::vector<BigInt>(n + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) {
    choose[i][0] = 1;
    for (std::size_t j = 1; j <= i; ++j)
      choose[i][j] = choose[i - 1][j - 1] + choose[i - 1][j];
  }

  using State = std::pair<std::size_t, std::uint64_t>;  // (remaining, f)
  std::map<State, BigInt> dp;
  dp[{n, 0}] = 1;
  for (std::size_t bucket = 0; bucket < n; ++bucket) {
    std::map<State, BigInt> next;
    const std::size_t buckets_left = n - bucket;
    for (const auto& [state, ways] : dp) {
      const auto [remaining, f] = state;
      for (std::size_t b = 0; b <= remaining; ++b) {
        if (buckets_left == 1 && b != remaining) continue;  // must place all
        next[{remaining - b, f + std::uint64_t{b} * b}] +=
            ways * choose[remaining][b];
      }
    }
    dp = std::move(next);
  }

  BigInt denom = 1;
  for (std::size_t i = 0; i < n; ++i) denom *= n;

  ExactDistribution out;
  out.n = n;
  for (const auto& [state, ways] : dp) {
    if (state.first != 0) continue;
    out.support[state.second] = BigRational(ways, denom);
  }
  return out;
}

}  // namespace tailsort
