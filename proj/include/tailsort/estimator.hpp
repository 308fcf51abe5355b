#pragma once

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tailsort/bounds.hpp"
#include "tailsort/occupancy.hpp"
#include "tailsort/rng.hpp"
#include "tailsort/sorting.hpp"
#include "tailsort/stats.hpp"
#include "tailsort/trie.hpp"

// Monte Carlo tail estimation. A trial is a pure function of
// (experiment, master_seed, trial index), and the only cross-trial reduction
// is a success count, so results are bit-identical under any thread count.

namespace tailsort {

enum class ExperimentKind {
  f_tail,
  g_tail,
  excess_tail,
  p0_tail,
  t_b2_tail,
  t_blogb_tail,
  qs_event_z,
};

inline const char* to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::f_tail: return "f_tail";
    case ExperimentKind::g_tail: return "g_tail";
    case ExperimentKind::excess_tail: return "excess_tail";
    case ExperimentKind::p0_tail: return "p0_tail";
    case ExperimentKind::t_b2_tail: return "t_b2_tail";
    case ExperimentKind::t_blogb_tail: return "t_blogb_tail";
    case ExperimentKind::qs_event_z: return "qs_event_z";
  }
  return "?";
}

inline ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "f_tail") return ExperimentKind::f_tail;
  if (s == "g_tail") return ExperimentKind::g_tail;
  if (s == "excess_tail") return ExperimentKind::excess_tail;
  if (s == "p0_tail") return ExperimentKind::p0_tail;
  if (s == "t_b2_tail") return ExperimentKind::t_b2_tail;
  if (s == "t_blogb_tail") return ExperimentKind::t_blogb_tail;
  if (s == "qs_event_z") return ExperimentKind::qs_event_z;
  throw std::invalid_argument("unknown experiment kind: " + s);
}

struct Experiment {
  ExperimentKind kind = ExperimentKind::f_tail;
  std::size_t n = 1;
  double threshold = 0.0;
  // trie kinds: prefix floor k (defaults to ceil(log2 n) when negative)
  std::int32_t k = -1;
  // qs_event_z: recursion-tree depth (defaults to log2 n when negative)
  std::int32_t depth = -1;
  std::uint32_t depth_cap = kDefaultDepthCap;

  std::uint32_t trie_k() const noexcept {
    return k >= 0 ? static_cast<std::uint32_t>(k) : ceil_log2(n);
  }
  std::uint32_t qs_depth() const noexcept {
    return depth >= 0 ? static_cast<std::uint32_t>(depth) : ceil_log2(n);
  }
};

/// n distinct keys with uniformly random rank order (a shuffled equispaced
/// grid; the comparison behavior of a sort depends only on ranks).
inline std::vector<Key> random_permutation_keys(std::size_t n, Rng& rng) {
  std::vector<Key> keys(n);
  const std::uint64_t step = n == 1 ? 0 : ~std::uint64_t{0} / n;
  for (std::size_t i = 0; i < n; ++i) keys[i].frac = step * i;
  for (std::size_t i = n; i > 1; --i)
    std::swap(keys[i - 1], keys[rng.next_below(i)]);
  return keys;
}

/// Event Z under the Bucket Sort distribution: all n/2 left-half bins empty
/// (every key fell in [1/2, 1)). Probability 2^-n.
inline bool event_z_bucket(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const auto b = sample_occupancy(n, rng);
  for (std::size_t j = 0; j < n / 2; ++j)
    if (b.counts[j] != 0) return false;
  return true;
}

inline double run_trial(const Experiment& e, std::uint64_t trial_seed) {
  switch (e.kind) {
    case ExperimentKind::f_tail: {
      Rng rng(trial_seed);
      return static_cast<double>(f_stat(sample_occupancy(e.n, rng)));
    }
    case ExperimentKind::g_tail: {
      Rng rng(trial_seed);
      return g_stat(sample_occupancy(e.n, rng));
    }
    case ExperimentKind::excess_tail: {
      StringSet L(e.n, trial_seed, e.depth_cap);
      return static_cast<double>(excess_path_length(L, e.trie_k()));
    }
    case ExperimentKind::p0_tail: {
      StringSet L(e.n, trial_seed, e.depth_cap);
      return static_cast<double>(excess_path_length(L, 0));
    }
    case ExperimentKind::t_b2_tail:
    case ExperimentKind::t_blogb_tail: {
      Rng rng(trial_seed);
      std::vector<Key> keys(e.n);
      for (auto& x : keys) x = random_key(rng);
      const auto variant = e.kind == ExperimentKind::t_b2_tail
                               ? BucketVariant::b2
                               : BucketVariant::blogb;
      return static_cast<double>(bucket_sort(keys, variant).cost.total_units());
    }
    case ExperimentKind::qs_event_z: {
      Rng rng(trial_seed);
      const std::uint32_t d = e.qs_depth();
      const auto keys = random_permutation_keys(e.n, rng);
      const auto result =
          quick_sort_random(keys, derive_seed(trial_seed, 1), d);
      const std::size_t half = std::size_t{1} << (d > 0 ? d - 1 : 0);
      for (std::size_t j = 0; j < half; ++j)
        if (result.occupancy.counts[j] != 0) return 0.0;
      return 1.0;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

struct TailEstimate {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 1.0;
  double rate_hat = 0.0;  // -ln(p_hat), or the censored lower bound ln(m/3)
  bool censored = false;  // set iff successes == 0
};

inline TailEstimate make_tail_estimate(std::uint64_t successes,
                                       std::uint64_t trials) {
  TailEstimate t;
  t.trials = trials;
  t.successes = successes;
  t.p_hat = static_cast<double>(successes) / static_cast<double>(trials);
  const auto ci = wilson_interval(successes, trials);
  t.ci_low = ci.low;
  t.ci_high = ci.high;
  if (successes == 0) {
    t.censored = true;
    // rule of three: p <= 3/m at ~95%, so R >= ln(m/3)
    t.rate_hat = std::log(static_cast<double>(trials) / 3.0);
  } else {
    t.rate_hat = rate(t.p_hat);
  }
  return t;
}

/// Runs m independent trials of e, trial t seeded by (master_seed, t);
/// success means statistic >= threshold.
inline TailEstimate estimate_tail(const Experiment& e, std::uint64_t m,
                                  std::uint64_t master_seed,
                                  unsigned threads = 1) {
  assert(m >= 1);
  if (threads <= 1) {
    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < m; ++t)
      if (run_trial(e, derive_seed(master_seed, t)) >= e.threshold)
        ++successes;
    return make_tail_estimate(successes, m);
  }
  constexpr std::uint64_t kChunk = 8192;
  std::atomic<std::uint64_t> next_chunk{0};
  std::atomic<std::uint64_t> successes{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      try {
        for (;;) {
          const std::uint64_t c = next_chunk.fetch_add(1);
          const std::uint64_t begin = c * kChunk;
          if (begin >= m) return;
          const std::uint64_t end = std::min(m, begin + kChunk);
          std::uint64_t local = 0;
          for (std::uint64_t t = begin; t < end; ++t)
            if (run_trial(e, derive_seed(master_seed, t)) >= e.threshold)
              ++local;
          successes.fetch_add(local);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return make_tail_estimate(successes.load(), m);
}

/// Mean of the statistic over m trials (single pass, trial order).
inline double pilot_mean(const Experiment& e, std::uint64_t m,
                         std::uint64_t master_seed) {
  double sum = 0.0;
  for (std::uint64_t t = 0; t < m; ++t)
    sum += run_trial(e, derive_seed(master_seed, t));
  return sum / static_cast<double>(m);
}

/// Analytic mean where the model provides one: E[f] = 2n - 1.
inline double analytic_mean(ExperimentKind kind, std::size_t n) noexcept {
  if (kind == ExperimentKind::f_tail)
    return 2.0 * static_cast<double>(n) - 1.0;
  return std::numeric_limits<double>::quiet_NaN();
}

struct RateScanRow {
  std::size_t n = 0;
  double mu = 0.0;          // analytic or pilot-estimated mean
  bool mu_is_pilot = false;
  double c = 0.0;
  double threshold = 0.0;
  TailEstimate estimate;
  double norm_sqrt = 0.0;   // rate / (sqrt(n) * log2 n)
  double norm_linear = 0.0; // rate / n
};

/// Per-n rate estimates at threshold mu + c*n, with both normalizations.
/// Means are analytic where available, otherwise pilot-estimated with
/// pilot_factor times the tail-run trial count.
inline std::vector<RateScanRow> rate_scan(ExperimentKind kind,
                                          const std::vector<std::size_t>& ns,
                                          double c, std::uint64_t m,
                                          std::uint64_t master_seed,
                                          unsigned threads = 1,
                                          std::uint64_t pilot_factor = 10) {
  std::vector<RateScanRow> rows;
  for (std::size_t n : ns) {
    Experiment e;
    e.kind = kind;
    e.n = n;
    RateScanRow row;
    row.n = n;
    row.c = c;
    row.mu = analytic_mean(kind, n);
    if (std::isnan(row.mu)) {
      row.mu = pilot_mean(e, pilot_factor * m, derive_seed(master_seed, n, 1));
      row.mu_is_pilot = true;
    }
    row.threshold = row.mu + c * static_cast<double>(n);
    e.threshold = row.threshold;
    row.estimate = estimate_tail(e, m, derive_seed(master_seed, n, 2), threads);
    const double r = row.estimate.rate_hat;
    const double dn = static_cast<double>(n);
    row.norm_sqrt = r / (std::sqrt(dn) * std::log2(dn));
    row.norm_linear = r / dn;
    rows.push_back(row);
  }
  return rows;
}

/// Draws m samples of f over sampled bin occupancies and m samples of f over
/// depth-log2(n) trie node occupancies, and chi-square tests their equality.
inline ChiSquareResult distribution_equality_test(std::size_t n,
                                                  std::uint64_t m,
                                                  std::uint64_t master_seed) {
  assert(n >= 2 && (n & (n - 1)) == 0);  // power of two
  const std::uint32_t d = ceil_log2(n);
  std::vector<std::uint64_t> arm_bins(m), arm_trie(m);
  for (std::uint64_t t = 0; t < m; ++t) {
    Rng rng(derive_seed(master_seed, 1, t));
    arm_bins[t] = f_stat(sample_occupancy(n, rng));
  }
  for (std::uint64_t t = 0; t < m; ++t) {
    StringSet L(n, derive_seed(master_seed, 2, t));
    arm_trie[t] = f_stat(node_occupancy(L, d));
  }
  return chi_square_two_sample(arm_bins, arm_trie);
}

struct DeltaDominationRow {
  std::uint32_t tau = 0;
  std::uint64_t threshold = 0;  // 16 * (tau + 2)
  std::uint64_t count = 0;
  double frequency = 0.0;
  double bound = 0.0;  // 2^-tau
  double std_error = 0.0;
  bool flagged = false;
};

struct DeltaDominationReport {
  std::uint64_t pooled = 0;      // total number of deltas pooled
  double mean_excess = 0.0;      // mean p_k per run
  double max_mean_delta = 0.0;   // max over i of mean deltas[i]
  std::vector<DeltaDominationRow> rows;
};

/// Pools the insertion deltas of m delta traces and compares the empirical
/// frequency of Delta >= 16 (tau + 2) against the geometric bound 2^-tau.
inline DeltaDominationReport delta_domination_experiment(
    std::size_t n, std::uint32_t k, std::uint64_t m, std::uint64_t master_seed,
    std::uint32_t tau_max = 8) {
  DeltaDominationReport report;
  std::vector<std::uint64_t> exceed(tau_max + 1, 0);
  std::vector<double> delta_sums(n, 0.0);
  std::uint64_t pooled_sum = 0;
  for (std::uint64_t t = 0; t < m; ++t) {
    StringSet L(n, derive_seed(master_seed, t));
    const auto trace = delta_trace(L, k);
    for (std::size_t i = 0; i < trace.deltas.size(); ++i) {
      const std::uint64_t d = trace.deltas[i];
      delta_sums[i] += static_cast<double>(d);
      pooled_sum += d;
      for (std::uint32_t tau = 0; tau <= tau_max; ++tau)
        if (d >= 16ULL * (tau + 2)) ++exceed[tau];
    }
  }
  report.pooled = m * n;
  report.mean_excess =
      static_cast<double>(pooled_sum) / static_cast<double>(m);
  for (double s : delta_sums)
    report.max_mean_delta =
        std::max(report.max_mean_delta, s / static_cast<double>(m));
  const double total = static_cast<double>(report.pooled);
  for (std::uint32_t tau = 0; tau <= tau_max; ++tau) {
    DeltaDominationRow row;
    row.tau = tau;
    row.threshold = 16ULL * (tau + 2);
    row.count = exceed[tau];
    row.frequency = static_cast<double>(exceed[tau]) / total;
    row.bound = std::pow(2.0, -static_cast<double>(tau));
    row.std_error =
        std::sqrt(row.frequency * (1.0 - row.frequency) / total);
    row.flagged = row.frequency > row.bound + 3.0 * row.std_error;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace tailsort
