// Command-line harness around the tailsort library. Every subcommand writes a
// results table (CSV by default, JSON with --format json) preceded by a
// metadata header echoing the full configuration, so any output file can be
// reproduced by re-running with the embedded config.
//
// Exit codes: 0 success, 2 configuration error, 3 depth-cap or size error.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tailsort/bounds.hpp"
#include "tailsort/estimator.hpp"
#include "tailsort/occupancy.hpp"
#include "tailsort/oracle.hpp"
#include "tailsort/sorting.hpp"
#include "tailsort/trie.hpp"
#include "tailsort/version.hpp"

namespace {

using nlohmann::json;
using namespace tailsort;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_rational(const BigRational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r) << "/"
     << boost::multiprecision::denominator(r);
  return os.str();
}

// A results table: metadata key/value pairs, a column header, and rows of
// preformatted cells. Rendered as CSV with "# key=value" comment lines, or
// as a single JSON object.
struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void meta(const std::string& key, const std::string& value) {
    metadata.emplace_back(key, value);
  }
  void meta(const std::string& key, double value) {
    metadata.emplace_back(key, fmt_double(value));
  }
  void meta(const std::string& key, std::uint64_t value) {
    metadata.emplace_back(key, std::to_string(value));
  }

  void write_csv(std::ostream& os) const {
    for (const auto& [k, v] : metadata) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows)
      for (std::size_t i = 0; i < row.size(); ++i)
        os << row[i] << (i + 1 < row.size() ? "," : "\n");
  }

  void write_json(std::ostream& os) const {
    json j;
    for (const auto& [k, v] : metadata) j["config"][k] = v;
    j["columns"] = columns;
    j["rows"] = rows;
    os << j.dump(2) << "\n";
  }
};

struct OutputOptions {
  std::string path;    // empty = stdout
  std::string format = "csv";
};

void emit(const Table& t, const OutputOptions& out) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out.path.empty()) {
    file.open(out.path);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + out.path);
    os = &file;
  }
  if (out.format == "json") {
    t.write_json(*os);
  } else {
    t.write_csv(*os);
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TAILSORT_SEED"))
    return std::strtoull(env, nullptr, 0);
  return kDefaultSeed;
}

void add_common_meta(Table& t, std::uint64_t seed) {
  t.meta("version", std::string(kVersion));
  t.meta("seed", seed);
}

std::string tail_row_c(std::optional<double> c) {
  return c ? fmt_double(*c) : std::string("nan");
}

void append_estimate_row(Table& t, const std::string& kind, std::size_t n,
                         std::optional<double> c, double threshold,
                         const TailEstimate& est) {
  t.rows.push_back({kind, std::to_string(n), tail_row_c(c),
                    fmt_double(threshold), std::to_string(est.trials),
                    std::to_string(est.successes), fmt_double(est.p_hat),
                    fmt_double(est.ci_low), fmt_double(est.ci_high),
                    fmt_double(est.rate_hat), est.censored ? "1" : "0"});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bucket Sort / random-trie upper-tail experiment harness"};
  app.require_subcommand(1);
  app.fallthrough();  // accept --out/--format after the subcommand name

  OutputOptions out;
  app.add_option("--out", out.path, "output file (default: stdout)")
      ->capture_default_str();
  app.add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  std::uint64_t seed = default_seed();
  std::uint64_t trials = 100000;
  std::size_t n = 16;
  std::vector<std::size_t> n_list;
  double c = 1.0;
  std::int32_t k = -1;
  std::uint32_t depth_cap = kDefaultDepthCap;
  unsigned threads = 1;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master seed (env TAILSORT_SEED, then a fixed default)");
  };
  auto add_threads = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads,
                    "worker threads (affects wall clock only, never results)");
  };

  // ---- sort-cost ----
  auto* sort_cost = app.add_subcommand(
      "sort-cost", "per-trial operation counts for a sort variant");
  std::string sort_variant = "b2";
  sort_cost->add_option("--n", n, "input size")->required();
  sort_cost->add_option("--variant", sort_variant, "b2 | blogb | qs")
      ->check(CLI::IsMember({"b2", "blogb", "qs"}));
  sort_cost->add_option("--trials", trials, "number of runs");
  add_seed(sort_cost);

  // ---- tail-estimate ----
  auto* tail = app.add_subcommand("tail-estimate",
                                  "Monte Carlo upper-tail probability");
  std::string kind_name = "f_tail";
  double threshold = 0.0;
  tail->add_option("--kind", kind_name, "statistic kind")
      ->check(CLI::IsMember({"f_tail", "g_tail", "excess_tail", "p0_tail",
                             "t_b2_tail", "t_blogb_tail", "qs_event_z"}));
  tail->add_option("--n", n, "instance size")->required();
  tail->add_option("--threshold", threshold, "success iff statistic >= threshold")
      ->required();
  tail->add_option("--trials", trials, "Monte Carlo trials");
  tail->add_option("--k", k, "prefix floor for trie kinds (default ceil(log2 n))");
  tail->add_option("--depth-cap", depth_cap, "trie depth cap in bits");
  add_seed(tail);
  add_threads(tail);

  // ---- rate-scan ----
  auto* scan = app.add_subcommand(
      "rate-scan", "rate estimates across n at threshold mu + c*n");
  std::uint64_t pilot_factor = 10;
  scan->add_option("--kind", kind_name, "statistic kind")
      ->check(CLI::IsMember({"f_tail", "g_tail", "excess_tail", "p0_tail",
                             "t_b2_tail", "t_blogb_tail"}));
  scan->add_option("--n-list", n_list, "instance sizes")->required();
  scan->add_option("--c", c, "deviation coefficient");
  scan->add_option("--trials", trials, "tail trials per n");
  scan->add_option("--pilot-factor", pilot_factor,
                   "pilot mean trials = factor * tail trials");
  add_seed(scan);
  add_threads(scan);

  // ---- trie-stats ----
  auto* tstats = app.add_subcommand("trie-stats",
                                    "per-trial trie path-length statistics");
  tstats->add_option("--n", n, "number of strings")->required();
  tstats->add_option("--k", k, "prefix floor (default ceil(log2 n))");
  tstats->add_option("--trials", trials, "number of sampled string sets");
  tstats->add_option("--depth-cap", depth_cap, "trie depth cap in bits");
  add_seed(tstats);

  // ---- delta-trace ----
  auto* dtrace = app.add_subcommand(
      "delta-trace", "pooled insertion-delta tail vs the geometric bound");
  std::uint32_t tau_max = 8;
  dtrace->add_option("--n", n, "number of strings")->required();
  dtrace->add_option("--k", k, "prefix floor (default ceil(log2 n))");
  dtrace->add_option("--trials", trials, "number of traces");
  dtrace->add_option("--tau-max", tau_max, "largest tau to tabulate");
  add_seed(dtrace);

  // ---- dist-equal ----
  auto* dequal = app.add_subcommand(
      "dist-equal", "chi-square equality test: bin occupancy f vs trie node f");
  dequal->add_option("--n", n, "size (power of two)")->required();
  dequal->add_option("--trials", trials, "samples per arm");
  add_seed(dequal);

  // ---- bounds-table ----
  auto* btable = app.add_subcommand("bounds-table",
                                    "closed-form Chernoff bound values");
  std::string bound_variant = "ch1";
  double mu = 1.0;
  std::vector<double> deltas;
  btable->add_option("--variant", bound_variant, "ch1..ch5")
      ->check(CLI::IsMember({"ch1", "ch2", "ch3", "ch4", "ch5"}));
  btable->add_option("--mu", mu, "expectation (or upper bound on it)");
  btable->add_option("--delta", deltas, "relative deviations")->required();

  // ---- oracle-exact ----
  auto* oracle = app.add_subcommand(
      "oracle-exact", "exact distribution of f for n <= 12, as rationals");
  oracle->add_option("--n", n, "size (at most 12)")->required();

  // ---- qs-compare ----
  auto* qsc = app.add_subcommand(
      "qs-compare",
      "event-Z frequency: Quick Sort recursion tree vs Bucket Sort bins");
  qsc->add_option("--n", n, "size (power of two)")->required();
  qsc->add_option("--trials", trials, "trials per arm");
  add_seed(qsc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Table t;

    if (*sort_cost) {
      add_common_meta(t, seed);
      t.meta("subcommand", std::string("sort-cost"));
      t.meta("n", std::uint64_t{n});
      t.meta("variant", sort_variant);
      t.meta("trials", trials);
      if (sort_variant == "qs") {
        t.columns = {"trial", "comparisons", "moves", "total_units"};
        for (std::uint64_t i = 0; i < trials; ++i) {
          Rng rng(derive_seed(seed, i));
          const auto keys = random_permutation_keys(n, rng);
          const auto r = quick_sort_random(keys, derive_seed(seed, i, 1));
          t.rows.push_back({std::to_string(i), std::to_string(r.cost.comparisons),
                            std::to_string(r.cost.moves),
                            std::to_string(r.cost.total_units())});
        }
      } else {
        const auto variant = sort_variant == "b2" ? BucketVariant::b2
                                                  : BucketVariant::blogb;
        t.columns = {"trial", "comparisons", "moves", "total_units", "f", "g"};
        for (std::uint64_t i = 0; i < trials; ++i) {
          Rng rng(derive_seed(seed, i));
          std::vector<Key> keys(n);
          for (auto& x : keys) x = random_key(rng);
          const auto r = bucket_sort(keys, variant);
          t.rows.push_back(
              {std::to_string(i), std::to_string(r.cost.comparisons),
               std::to_string(r.cost.moves), std::to_string(r.cost.total_units()),
               std::to_string(f_stat(r.occupancy)),
               fmt_double(g_stat(r.occupancy))});
        }
      }
    } else if (*tail) {
      Experiment e;
      e.kind = experiment_kind_from_string(kind_name);
      e.n = n;
      e.threshold = threshold;
      e.k = k;
      e.depth_cap = depth_cap;
      add_common_meta(t, seed);
      t.meta("subcommand", std::string("tail-estimate"));
      t.meta("kind", kind_name);
      t.meta("n", std::uint64_t{n});
      t.meta("threshold", threshold);
      t.meta("k", std::to_string(k));
      t.meta("depth_cap", std::uint64_t{depth_cap});
      t.meta("trials", trials);
      t.meta("threads", std::uint64_t{threads});
      t.columns = {"kind", "n", "c", "threshold", "trials", "successes",
                   "p_hat", "ci_low", "ci_high", "rate_hat", "censored"};
      const auto est = estimate_tail(e, trials, seed, threads);
      append_estimate_row(t, kind_name, n, std::nullopt, threshold, est);
    } else if (*scan) {
      add_common_meta(t, seed);
      t.meta("subcommand", std::string("rate-scan"));
      t.meta("kind", kind_name);
      t.meta("c", c);
      t.meta("trials", trials);
      t.meta("pilot_factor", pilot_factor);
      t.meta("threads", std::uint64_t{threads});
      t.columns = {"kind", "n", "c", "mu", "mu_source", "threshold", "trials",
                   "successes", "p_hat", "ci_low", "ci_high", "rate_hat",
                   "censored", "rate_per_sqrtn_logn", "rate_per_n"};
      const auto rows = rate_scan(experiment_kind_from_string(kind_name),
                                  n_list, c, trials, seed, threads,
                                  pilot_factor);
      for (const auto& row : rows) {
        const auto& est = row.estimate;
        t.rows.push_back(
            {kind_name, std::to_string(row.n), fmt_double(row.c),
             fmt_double(row.mu), row.mu_is_pilot ? "pilot" : "analytic",
             fmt_double(row.threshold), std::to_string(est.trials),
             std::to_string(est.successes), fmt_double(est.p_hat),
             fmt_double(est.ci_low), fmt_double(est.ci_high),
             fmt_double(est.rate_hat), est.censored ? "1" : "0",
             fmt_double(row.norm_sqrt), fmt_double(row.norm_linear)});
      }
    } else if (*tstats) {
      const std::uint32_t kk =
          k >= 0 ? static_cast<std::uint32_t>(k) : ceil_log2(n);
      const bool pow2 = n >= 1 && (n & (n - 1)) == 0;
      add_common_meta(t, seed);
      t.meta("subcommand", std::string("trie-stats"));
      t.meta("n", std::uint64_t{n});
      t.meta("k", std::uint64_t{kk});
      t.meta("trials", trials);
      t.columns = {"trial", "p0", "p_k", "f_nodes", "g_nodes"};
      for (std::uint64_t i = 0; i < trials; ++i) {
        StringSet L(n, derive_seed(seed, i), depth_cap);
        const auto p0 = excess_path_length(L, 0);
        const auto pk = excess_path_length(L, kk);
        std::string f_cell = "nan", g_cell = "nan";
        if (pow2) {
          const auto occ = node_occupancy(L, ceil_log2(n));
          f_cell = std::to_string(f_stat(occ));
          g_cell = fmt_double(g_stat(occ));
        }
        t.rows.push_back({std::to_string(i), std::to_string(p0),
                          std::to_string(pk), f_cell, g_cell});
      }
    } else if (*dtrace) {
      const std::uint32_t kk =
          k >= 0 ? static_cast<std::uint32_t>(k) : ceil_log2(n);
      add_common_meta(t, seed);
      t.meta("subcommand", std::string("delta-trace"));
      t.meta("n", std::uint64_t{n});
      t.meta("k", std::uint64_t{kk});
      t.meta("trials", trials);
      const auto report =
          delta_domination_experiment(n, kk, trials, seed, tau_max);
      t.meta("pooled_deltas", report.pooled);
      t.meta("mean_excess", report.mean_excess);
      t.meta("max_mean_delta", report.max_mean_delta);
      t.columns = {"tau", "threshold", "count", "frequency", "bound",
                   "std_error", "flagged"};
      for (const auto& row : report.rows)
        t.rows.push_back({std::to_string(row.tau), std::to_string(row.threshold),
                          std::to_string(row.count), fmt_double(row.frequency),
                          fmt_double(row.bound), fmt_double(row.std_error),
                          row.flagged ? "1" : "0"});
    } else if (*dequal) {
      if (n < 2 || (n & (n - 1)) != 0)
        throw CLI::ValidationError("--n", "must be a power of two >= 2");
      add_common_meta(t, seed);
      t.meta("subcommand", std::string("dist-equal"));
      t.meta("n", std::uint64_t{n});
      t.meta("trials", trials);
      t.columns = {"n", "trials_per_arm", "chi2", "dof", "bins", "p_value"};
      const auto r = distribution_equality_test(n, trials, seed);
      t.rows.push_back({std::to_string(n), std::to_string(trials),
                        fmt_double(r.statistic), std::to_string(r.dof),
                        std::to_string(r.bins), fmt_double(r.p_value)});
    } else if (*btable) {
      add_common_meta(t, kDefaultSeed);
      t.meta("subcommand", std::string("bounds-table"));
      t.columns = {"variant", "mu", "delta", "bound"};
      const auto variant = chernoff_variant_from_string(bound_variant);
      for (double d : deltas) {
        const double bound = chernoff_bound({variant, mu, d});
        t.rows.push_back({bound_variant, fmt_double(mu), fmt_double(d),
                          fmt_double(bound)});
      }
    } else if (*oracle) {
      const auto dist = exact_f_distribution(n);
      if (out.format == "json") {
        json j;
        j["config"] = {{"subcommand", "oracle-exact"},
                       {"n", n},
                       {"version", kVersion}};
        json support = json::object();
        for (const auto& [value, prob] : dist.support)
          support[std::to_string(value)] = fmt_rational(prob);
        j["support"] = support;
        j["mean"] = fmt_rational(dist.mean());
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!out.path.empty()) {
          file.open(out.path);
          os = &file;
        }
        *os << j.dump(2) << "\n";
        return 0;
      }
      add_common_meta(t, kDefaultSeed);
      t.meta("subcommand", std::string("oracle-exact"));
      t.meta("n", std::uint64_t{n});
      t.meta("mean", fmt_rational(dist.mean()));
      t.columns = {"f", "probability"};
      for (const auto& [value, prob] : dist.support)
        t.rows.push_back({std::to_string(value), fmt_rational(prob)});
    } else if (*qsc) {
      if (n < 2 || (n & (n - 1)) != 0)
        throw CLI::ValidationError("--n", "must be a power of two >= 2");
      add_common_meta(t, seed);
      t.meta("subcommand", std::string("qs-compare"));
      t.meta("n", std::uint64_t{n});
      t.meta("trials", trials);
      t.columns = {"arm", "trials", "successes", "p_hat", "ci_low", "ci_high",
                   "reference"};
      Experiment e;
      e.kind = ExperimentKind::qs_event_z;
      e.n = n;
      e.threshold = 0.5;
      const auto qs_est = estimate_tail(e, trials, derive_seed(seed, 1));
      std::uint64_t bucket_successes = 0;
      for (std::uint64_t i = 0; i < trials; ++i)
        if (event_z_bucket(n, derive_seed(seed, 2, i))) ++bucket_successes;
      const auto b_est = make_tail_estimate(bucket_successes, trials);
      t.rows.push_back({"quicksort", std::to_string(trials),
                        std::to_string(qs_est.successes),
                        fmt_double(qs_est.p_hat), fmt_double(qs_est.ci_low),
                        fmt_double(qs_est.ci_high),
                        fmt_double(1.0 / (2.0 * static_cast<double>(n)))});
      t.rows.push_back({"bucket", std::to_string(trials),
                        std::to_string(b_est.successes),
                        fmt_double(b_est.p_hat), fmt_double(b_est.ci_low),
                        fmt_double(b_est.ci_high),
                        fmt_double(std::pow(2.0, -static_cast<double>(n)))});
    }

    emit(t, out);
    return 0;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const DepthCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
