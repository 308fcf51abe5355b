#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

// Small statistical toolbox: Wilson score intervals, exact binomial tails,
// and a two-sample chi-square test over integer-valued statistics.

namespace tailsort {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

/// Wilson score interval for a binomial proportion. z = 1.959964 is the
/// 95% two-sided quantile, 2.575829 the 99% one.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                double z = 1.959964) {
  const double m = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / m;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / m;
  const double center = (p + z2 / (2.0 * m)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / m + z2 / (4.0 * m * m)) / denom;
  // the closed forms for p = 0 and p = 1 simplify to exact endpoints, which
  // floating-point evaluation would otherwise miss by a few ulps
  const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double high =
      successes == trials ? 1.0 : std::min(1.0, center + half);
  return {low, high};
}

/// log C(n, k) via lgamma.
inline double log_binom(std::uint64_t n, std::uint64_t k) noexcept {
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

/// Exact Binomial(n, p) upper tail Pr[X >= k], summed in long double.
inline double binomial_upper_tail(std::uint64_t n, double p, std::uint64_t k) {
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  long double s = 0.0L;
  for (std::uint64_t i = k; i <= n; ++i)
    s += std::exp(static_cast<long double>(
        log_binom(n, i) + i * std::log(p) + (n - i) * std::log1p(-p)));
  return static_cast<double>(std::min(s, 1.0L));
}

/// Exact Binomial(n, p) lower tail Pr[X <= k].
inline double binomial_lower_tail(std::uint64_t n, double p, std::uint64_t k) {
  if (k >= n) return 1.0;
  long double s = 0.0L;
  for (std::uint64_t i = 0; i <= k; ++i)
    s += std::exp(static_cast<long double>(
        log_binom(n, i) + i * std::log(p) + (n - i) * std::log1p(-p)));
  return static_cast<double>(std::min(s, 1.0L));
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::uint64_t dof = 0;
  double p_value = 1.0;
  std::uint64_t bins = 0;
};

/// Two-sample chi-square test of distribution equality over integer-valued
/// samples. Bins are built on the union support and adjacent values are
/// merged until every expected cell count is at least `min_expected`.
inline ChiSquareResult chi_square_two_sample(
    const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
    double min_expected = 5.0) {
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> hist;
  for (auto v : a) ++hist[v].first;
  for (auto v : b) ++hist[v].second;

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double total = na + nb;

  // Merge adjacent support values left to right; a trailing undersized bin
  // is folded into its predecessor.
  std::vector<std::pair<double, double>> bins;
  double ca = 0.0, cb = 0.0;
  for (const auto& [value, counts] : hist) {
    (void)value;
    ca += static_cast<double>(counts.first);
    cb += static_cast<double>(counts.second);
    const double pooled = (ca + cb) / total;
    if (pooled * na >= min_expected && pooled * nb >= min_expected) {
      bins.emplace_back(ca, cb);
      ca = cb = 0.0;
    }
  }
  if (ca + cb > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(ca, cb);
    } else {
      bins.back().first += ca;
      bins.back().second += cb;
    }
  }

  ChiSquareResult r;
  r.bins = bins.size();
  if (bins.size() < 2) return r;  // degenerate: everything in one bin
  for (const auto& [oa, ob] : bins) {
    const double pooled = (oa + ob) / total;
    const double ea = pooled * na;
    const double eb = pooled * nb;
    r.statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  r.dof = bins.size() - 1;
  boost::math::chi_squared dist(static_cast<double>(r.dof));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace tailsort
