#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "brx/distribution.hpp"
#include "brx/rng.hpp"
#include "brx/selection.hpp"

using namespace brx;

TEST_CASE("hand-worked instances") {
  const std::vector<double> xs{0.5, 0.3, 0.4};
  const auto r = maximal_function(xs, 0.8);
  CHECK(r.count == 2);
  CHECK(r.indices == std::vector<int>{1, 2});  // 0.3 + 0.4
  CHECK(r.total == doctest::Approx(0.7));

  // budget too small for anything
  const auto none = maximal_function(xs, 0.2);
  CHECK(none.count == 0);
  CHECK(none.indices.empty());
  CHECK(none.total == 0.0);

  // everything fits
  const auto all = maximal_function(xs, 10.0);
  CHECK(all.count == 3);
  CHECK(all.total == doctest::Approx(1.2));
}

TEST_CASE("ties break by index, keeping the chosen set unique") {
  const std::vector<double> xs{0.2, 0.2, 0.2};
  const auto r = maximal_function(xs, 0.4);
  CHECK(r.count == 2);
  CHECK(r.indices == std::vector<int>{0, 1});
}

TEST_CASE("count-only variant agrees with the full result") {
  Rng rng(40);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 1 + static_cast<int>(rng.next_double() * 30);
    std::vector<double> xs(n);
    for (auto& x : xs) x = 2.0 * rng.next_double();
    const double s = rng.next_double() * n * 0.5;
    CHECK(maximal_count(xs, s) == maximal_function(xs, s).count);
  }
}

TEST_CASE("greedy prefix equals exhaustive subset search") {
  Rng rng(41);
  for (int rep = 0; rep < 2000; ++rep) {
    const int n = 1 + static_cast<int>(rng.next_double() * 12);
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.next_double() * (rep % 3 ? 1.0 : 2.0);
    const double s = rng.next_double() * 2.0;
    const auto fast = maximal_function(xs, s);
    CHECK(fast.count == brute_force_maximal(xs, s));
    // the reported set is feasible and matches its own bookkeeping
    double total = 0.0;
    for (int idx : fast.indices) total += xs[static_cast<std::size_t>(idx)];
    CHECK(total == doctest::Approx(fast.total).epsilon(1e-12));
    CHECK(fast.total <= s + 1e-12);
    CHECK(static_cast<int>(fast.indices.size()) == fast.count);
  }
}

TEST_CASE("brute force rejects oversized instances") {
  std::vector<double> xs(21, 0.1);
  CHECK_THROWS_AS(brute_force_maximal(xs, 1.0), std::invalid_argument);
}

TEST_CASE("monotone in budget and under element insertion") {
  Rng rng(42);
  std::vector<double> xs(25);
  for (auto& x : xs) x = rng.next_double();
  int prev = -1;
  for (double s = 0.0; s <= 3.0; s += 0.05) {
    const int c = maximal_count(xs, s);
    CHECK(c >= prev);
    prev = c;
  }
  // adding an element never lowers the count
  std::vector<double> grown;
  for (double x : xs) {
    const int before = maximal_count(grown, 1.0);
    grown.push_back(x);
    CHECK(maximal_count(grown, 1.0) >= before);
  }
}

TEST_CASE("below-threshold census") {
  const std::vector<double> xs{0.1, 0.5, 0.3, 0.9};
  const auto b = count_below_threshold(xs, 0.3);
  CHECK(b.count == 2);  // boundary value included
  CHECK(b.total == doctest::Approx(0.4));
  const auto empty = count_below_threshold(xs, 0.05);
  CHECK(empty.count == 0);
  CHECK(empty.total == 0.0);
}

TEST_CASE("selected set and threshold census nest, with the exchange inequality") {
  Rng rng(43);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_double() * 20);
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.next_double();
    const double s = 0.2 + rng.next_double() * 1.5;
    const double t = rng.next_double();

    const auto sel = maximal_function(xs, s);
    std::set<int> a(sel.indices.begin(), sel.indices.end());
    std::set<int> b;
    double sb = 0.0;
    for (int i = 0; i < n; ++i) {
      if (xs[static_cast<std::size_t>(i)] <= t) {
        b.insert(i);
        sb += xs[static_cast<std::size_t>(i)];
      }
    }
    const bool a_in_b = std::includes(b.begin(), b.end(), a.begin(), a.end());
    const bool b_in_a = std::includes(a.begin(), a.end(), b.begin(), b.end());
    CHECK((a_in_b || b_in_a));

    const double lhs = t * (static_cast<double>(a.size()) - static_cast<double>(b.size()));
    CHECK(lhs <= sel.total - sb + 1e-9);
  }
}
