#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "brx/rng.hpp"
#include "brx/stats.hpp"
#include "brx/studies.hpp"

using namespace brx;

namespace {

// exhaustive longest strictly increasing subsequence for tiny inputs
int lis_brute(const std::vector<double>& xs) {
  const int n = static_cast<int>(xs.size());
  int best = 0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double last = -1.0;
    int len = 0;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      if (xs[static_cast<std::size_t>(i)] > last) {
        last = xs[static_cast<std::size_t>(i)];
        ++len;
      } else {
        ok = false;
      }
    }
    if (ok) best = std::max(best, len);
  }
  return best;
}

}  // namespace

TEST_CASE("harmonic numbers") {
  CHECK(harmonic_number(1) == 1.0);
  CHECK(harmonic_number(2) == 1.5);
  CHECK(harmonic_number(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
  // the capped-reciprocal expectation telescopes to H_n exactly
  for (int n : {1, 2, 3, 7, 50, 1000}) {
    CHECK(capped_reciprocal_mean_exact(n) == doctest::Approx(harmonic_number(n)).epsilon(1e-12));
  }
  // asymptotics: H_n - ln n decreases to the Euler constant
  const double tail = harmonic_number(1000) - std::log(1000.0) - kEulerGammaPrinted;
  CHECK(tail > 0.0);
  CHECK(tail < 1e-3);
}

TEST_CASE("fractional-part integral of 1/x") {
  // integral of {1/x} over (eps, 1) converges to 1 - gamma
  const double integral = fractional_reciprocal_integral(1e-8);
  CHECK(std::fabs(1.0 - integral - kEulerGammaPrinted) <= 2e-4);
  // monotone in the cutoff
  CHECK(fractional_reciprocal_integral(1e-4) <= integral + 1e-12);
}

TEST_CASE("longest increasing subsequence: pins") {
  const std::vector<double> empty;
  const std::vector<double> one{5.0};
  const std::vector<double> up{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> down{4.0, 3.0, 2.0, 1.0};
  const std::vector<double> mixed{3.0, 1.0, 4.0, 1.5, 5.0, 9.0, 2.0, 6.0};
  const std::vector<double> flat{1.0, 1.0, 1.0};
  CHECK(lis_length(empty) == 0);
  CHECK(lis_length(one) == 1);
  CHECK(lis_length(up) == 4);
  CHECK(lis_length(down) == 1);
  CHECK(lis_length(mixed) == 4);  // e.g. 1, 1.5, 5, 9
  CHECK(lis_length(flat) == 1);   // strictly increasing
}

TEST_CASE("longest increasing subsequence: exhaustive cross-check") {
  Rng rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + static_cast<int>(rng.next_double() * 10);
    std::vector<double> xs(n);
    for (auto& x : xs) x = rng.next_double();
    CHECK(lis_length(xs) == lis_brute(xs));
  }
}

TEST_CASE("subsequence length concentrates near twice the square root") {
  // exact E[L_25] = 7.554064326073 by summing lambda_1 * (f^lambda)^2 / 25!
  // over all partitions of 25 (hook length formula)
  Rng rng(18);
  RunningMoments rm;
  for (int rep = 0; rep < 20000; ++rep) {
    std::vector<double> xs(25);
    for (auto& x : xs) x = rng.next_double();
    rm.add(static_cast<double>(lis_length(xs)));
  }
  CHECK(std::fabs(rm.mean - 7.554064326073) <= 4.0 * rm.std_error());
}

TEST_CASE("study: scaled uniform family") {
  const auto rep = run_study("scaled_uniform_bound", 30, 4000, 21);
  CHECK(rep.pass);
  CHECK(rep.metrics.at("bound_gap") <= 1e-9);
  CHECK(rep.metrics.at("mc_mean_independent") + 3.0 * rep.metrics.at("mc_se_independent") <=
        rep.metrics.at("bound"));
  CHECK(rep.metrics.at("mc_mean_comonotone") + 3.0 * rep.metrics.at("mc_se_comonotone") <=
        rep.metrics.at("bound"));
}

TEST_CASE("study: capped reciprocal expectation") {
  const auto rep = run_study("capped_reciprocal", 100, 20000, 22);
  CHECK(rep.pass);
  CHECK(rep.metrics.at("identity_mismatch_rate") <= 1e-3);
  const double mean = rep.metrics.at("mc_mean_comonotone");
  const double se = rep.metrics.at("mc_se_comonotone");
  CHECK(std::fabs(mean - harmonic_number(100)) <= 3.0 * se);
}

TEST_CASE("study: sorted-sample selection") {
  const auto rep = run_study("order_statistics", 40, 4000, 23);
  CHECK(rep.pass);
  CHECK(rep.metrics.at("bound_gap") <= 1e-9);
  CHECK(rep.metrics.at("mean_over_bound") <= 1.0);
}

TEST_CASE("study: subsequence asymptotics") {
  const auto rep = run_study("lis_asymptotics", 100, 4000, 24);
  CHECK(rep.pass);
  CHECK(std::fabs(rep.metrics.at("mc_mean") - rep.metrics.at("prediction")) <=
        rep.metrics.at("prediction_band"));
}

TEST_CASE("study: unknown case is a usage error") {
  CHECK_THROWS_AS(run_study("bogus_case", 10, 100, 1), std::invalid_argument);
}
