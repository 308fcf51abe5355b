#include <algorithm>
#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "tailsort/estimator.hpp"
#include "tailsort/rng.hpp"
#include "tailsort/sorting.hpp"

using namespace tailsort;

namespace {

std::vector<Key> keys_from(std::initializer_list<double> vs) {
  std::vector<Key> out;
  for (double v : vs) out.push_back(Key::from_double(v));
  return out;
}

std::vector<Key> random_keys(std::size_t n, Rng& rng) {
  std::vector<Key> out(n);
  for (auto& x : out) x = random_key(rng);
  return out;
}

bool is_sorted_keys(const std::vector<Key>& ks) {
  return std::is_sorted(ks.begin(), ks.end());
}

}  // namespace

TEST_CASE("insertion sort counts comparisons exactly", "[sorting]") {
  SECTION("empty input") {
    auto [sorted, cost] = insertion_sort(std::vector<Key>{});
    CHECK(sorted.empty());
    CHECK(cost.comparisons == 0);
  }
  SECTION("hand trace") {
    auto [sorted, cost] = insertion_sort(keys_from({0.3, 0.1, 0.2}));
    CHECK(sorted == keys_from({0.1, 0.2, 0.3}));
    CHECK(cost.comparisons == 3);
  }
  SECTION("reverse-sorted worst case m(m-1)/2") {
    std::vector<Key> ks;
    for (int i = 9; i >= 0; --i) ks.push_back(Key::from_double(i / 10.0));
    auto [sorted, cost] = insertion_sort(ks);
    CHECK(is_sorted_keys(sorted));
    CHECK(cost.comparisons == 45);
  }
  SECTION("never exceeds m(m-1)/2") {
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t m = 1 + rng.next_below(40);
      auto [sorted, cost] = insertion_sort(random_keys(m, rng));
      CHECK(is_sorted_keys(sorted));
      CHECK(cost.comparisons <= m * (m - 1) / 2);
    }
  }
}

TEST_CASE("merge sort comparison bounds", "[sorting]") {
  SECTION("singleton") {
    auto [sorted, cost] = merge_sort(keys_from({0.5}));
    CHECK(cost.comparisons == 0);
  }
  SECTION("single merge step") {
    auto [sorted, cost] = merge_sort(keys_from({0.4, 0.2}));
    CHECK(sorted == keys_from({0.2, 0.4}));
    CHECK(cost.comparisons == 1);
  }
  SECTION("m=16: comparisons within [m-1, m log2 m - m + 1]") {
    Rng rng(22);
    for (int rep = 0; rep < 20; ++rep) {
      auto [sorted, cost] = merge_sort(random_keys(16, rng));
      CHECK(is_sorted_keys(sorted));
      CHECK(cost.comparisons >= 15);
      CHECK(cost.comparisons <= 49);
    }
  }
}

TEST_CASE("sorts are stable", "[sorting]") {
  // ties broken by input order, observable through a payload index
  using Tagged = std::pair<int, int>;  // (key, original position)
  auto less = [](const Tagged& a, const Tagged& b) { return a.first < b.first; };
  std::vector<Tagged> input = {{2, 0}, {1, 1}, {2, 2}, {1, 3}, {2, 4}, {1, 5}};
  const std::vector<Tagged> expected = {{1, 1}, {1, 3}, {1, 5},
                                        {2, 0}, {2, 2}, {2, 4}};
  CHECK(insertion_sort(input, less).first == expected);
  CHECK(merge_sort(input, less).first == expected);
}

TEST_CASE("bucket sort", "[sorting]") {
  SECTION("degenerate single bucket, reverse-ordered, b2 variant") {
    const std::size_t n = 12;
    std::vector<Key> ks;
    for (std::size_t i = 0; i < n; ++i)
      ks.push_back(Key{static_cast<std::uint64_t>(n - i)});  // all bucket 0
    const auto r = bucket_sort(ks, BucketVariant::b2);
    CHECK(r.occupancy.counts[0] == n);
    CHECK(r.cost.comparisons == n * (n - 1) / 2);
    CHECK(r.cost.moves >= 2 * n);  // distribution + scan
    CHECK(is_sorted_keys(r.sorted));
  }
  SECTION("one key per bucket: zero inner comparisons") {
    const auto r =
        bucket_sort(keys_from({0.05, 0.30, 0.55, 0.80}), BucketVariant::b2);
    CHECK(r.occupancy.counts == std::vector<std::uint32_t>{1, 1, 1, 1});
    CHECK(r.cost.comparisons == 0);
    CHECK(r.cost.moves == 8);
  }
  SECTION("both variants agree with merge sort on random inputs") {
    Rng rng(33);
    for (int rep = 0; rep < 200; ++rep) {
      const std::size_t n = 1 + rng.next_below(64);
      const auto ks = random_keys(n, rng);
      const auto reference = merge_sort(ks).first;
      const auto b2 = bucket_sort(ks, BucketVariant::b2);
      const auto blogb = bucket_sort(ks, BucketVariant::blogb);
      CHECK(b2.sorted == reference);
      CHECK(blogb.sorted == reference);
      CHECK(b2.occupancy.total() == n);
      CHECK(blogb.occupancy.total() == n);
    }
  }
  SECTION("per-bucket b2 inner cost at most B(B-1)/2 comparisons") {
    Rng rng(44);
    for (int rep = 0; rep < 50; ++rep) {
      const auto ks = random_keys(48, rng);
      const auto r = bucket_sort(ks, BucketVariant::b2);
      std::uint64_t worst = 0;
      for (auto b : r.occupancy.counts)
        worst += std::uint64_t{b} * (b - (b > 0 ? 1 : 0)) / 2;
      CHECK(r.cost.comparisons <= worst);
    }
  }
}

TEST_CASE("linear relation between b2 cost and n + f", "[sorting]") {
  // ratio window frozen from a pilot run; the cost-unit convention is
  // 1 per comparison, 1 per write, 2n writes for distribute + scan
  constexpr double kLow = 0.85;
  constexpr double kHigh = 1.25;
  Rng rng(55);
  for (std::size_t n : {64, 256, 1024}) {
    for (int rep = 0; rep < 300; ++rep) {
      const auto ks = random_keys(n, rng);
      const auto r = bucket_sort(ks, BucketVariant::b2);
      const double denom =
          static_cast<double>(n) + static_cast<double>(f_stat(r.occupancy));
      const double ratio = static_cast<double>(r.cost.total_units()) / denom;
      REQUIRE(ratio >= kLow);
      REQUIRE(ratio <= kHigh);
    }
  }
}

TEST_CASE("randomized quick sort", "[sorting]") {
  SECTION("singleton") {
    const auto r = quick_sort_random(keys_from({0.5}), 1, 0);
    CHECK(r.cost.comparisons == 0);
    CHECK(r.occupancy.counts == std::vector<std::uint32_t>{1});
  }
  SECTION("median pivot first: 2 comparisons, occupancy (1,1) at depth 1") {
    const auto ks = keys_from({0.1, 0.5, 0.9});
    bool found = false;
    for (std::uint64_t seed = 0; seed < 64 && !found; ++seed) {
      const auto r = quick_sort_random(ks, seed, 1);
      if (r.occupancy.counts == std::vector<std::uint32_t>{1, 1}) {
        CHECK(r.cost.comparisons == 2);
        CHECK(r.sorted == keys_from({0.1, 0.5, 0.9}));
        found = true;
      }
    }
    CHECK(found);
  }
  SECTION("sorts correctly with comparisons n-1 per call") {
    Rng rng(66);
    for (int rep = 0; rep < 100; ++rep) {
      const std::size_t n = 1 + rng.next_below(100);
      const auto ks = random_permutation_keys(n, rng);
      const auto r = quick_sort_random(ks, rng.next(), 3);
      CHECK(is_sorted_keys(r.sorted));
      CHECK(r.sorted.size() == n);
      // occupancy at depth 3 + pivots consumed above = n
      std::uint64_t at_depth = 0;
      for (auto c : r.occupancy.counts) at_depth += c;
      CHECK(at_depth <= n);
    }
  }
  SECTION("occupancy + pivots above depth d account for every key") {
    // count pivots via comparisons is indirect; instead check depth 0
    Rng rng(7);
    const auto ks = random_permutation_keys(10, rng);
    const auto r = quick_sort_random(ks, 9, 0);
    CHECK(r.occupancy.counts == std::vector<std::uint32_t>{10});
  }
  SECTION("mean comparisons matches 2(n+1)H_n - 4n at n=100") {
    const std::size_t n = 100;
    const std::uint64_t m = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t t = 0; t < m; ++t) {
      Rng rng(derive_seed(77, t));
      const auto ks = random_permutation_keys(n, rng);
      const auto r = quick_sort_random(ks, derive_seed(77, t, 1), 0);
      const double c = static_cast<double>(r.cost.comparisons);
      sum += c;
      sumsq += c * c;
    }
    const double mean = sum / static_cast<double>(m);
    const double var =
        (sumsq / static_cast<double>(m) - mean * mean);
    const double se = std::sqrt(var / static_cast<double>(m));
    const double expected = 647.8502585632034;  // 2(n+1)H_n - 4n
    CHECK(std::abs(mean - expected) <= 3.0 * se);
  }
}
