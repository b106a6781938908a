#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "brx/bellman.hpp"
#include "brx/distribution.hpp"
#include "brx/grid_cache.hpp"

using namespace brx;

namespace {
const Distribution kUniform = Distribution::uniform_scaled(1.0);
const GridSpec kCoarse{501, 0.0, 1.0};
const GridSpec kFine{2001, 0.0, 1.0};
}  // namespace

TEST_CASE("one and two stages match the closed forms") {
  for (auto problem : {Problem::knapsack, Problem::monotone}) {
    const auto sol = problem == Problem::knapsack ? solve_knapsack_values(kUniform, 2, kFine)
                                                  : solve_monotone_values(kUniform, 2, kFine);
    const auto& g = sol.values.grid;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = g[j];
      CHECK(sol.values.values[0][j] == 0.0);
      CHECK(sol.values.values[1][j] == doctest::Approx(x).epsilon(1e-12));
      CHECK(sol.values.values[2][j] ==
            doctest::Approx(2.0 * x - 0.5 * x * x).epsilon(1e-12));
    }
  }
}

TEST_CASE("the two recursions agree on uniform observations") {
  CHECK(value_equality_gap(0, kCoarse) == 0.0);
  CHECK(value_equality_gap(1, kCoarse) <= 1e-12);
  const double coarse = value_equality_gap(25, kCoarse);
  const double fine = value_equality_gap(25, kFine);
  CHECK(fine <= 5e-4);
  CHECK(coarse <= 5e-4);
  // the gap is a real discretization signal: refinement buys accuracy
  CHECK(fine <= coarse / 3.0);
}

TEST_CASE("stage kernel: both problems advance the same input identically") {
  // from the exact one-stage value w(x) = x the next stage must coincide
  const auto base = solve_knapsack_values(kUniform, 1, kCoarse);
  const auto& grid = base.values.grid;
  const auto& w = base.values.values[1];
  std::vector<double> out_k(w.size()), out_m(w.size()), a_k(w.size()), a_m(w.size());
  std::vector<std::uint8_t> c_k(w.size()), c_m(w.size());
  bellman_stage_update(Problem::knapsack, kUniform, grid, w, out_k, a_k, c_k);
  bellman_stage_update(Problem::monotone, kUniform, grid, w, out_m, a_m, c_m);
  for (std::size_t j = 0; j < w.size(); ++j) {
    CHECK(out_k[j] == doctest::Approx(out_m[j]).epsilon(1e-6));
    CHECK(a_k[j] == doctest::Approx(a_m[j]).epsilon(1e-9));
    CHECK(c_k[j] == c_m[j]);
  }
}

TEST_CASE("indifference thresholds: clamped and interior roots") {
  const auto sol = solve_knapsack_values(kUniform, 3, GridSpec{4001, 0.0, 1.0});
  const auto& alpha = sol.thresholds.alpha;
  const auto& clamped = sol.thresholds.clamped;

  // two stages to go at full budget: v_1(1) - 1 = 0 = v_1(0), window is everything
  CHECK(alpha[2].back() == doctest::Approx(1.0));
  CHECK(clamped[2].back() == 1);

  // three stages to go: v_2(u) = 2u - u^2/2 = v_2(1) - 1 = 1/2 at u = 2 - sqrt(3)
  CHECK(clamped[3].back() == 0);
  CHECK(alpha[3].back() == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-6));
  CHECK(sol.alpha_at(3, 1.0) == doctest::Approx(alpha[3].back()).epsilon(1e-12));

  // interpolated threshold stays inside [0, x]
  for (double x : {0.05, 0.31, 0.5, 0.77, 1.0}) {
    for (int k = 1; k <= 3; ++k) {
      const double a = sol.alpha_at(k, x);
      CHECK(a >= 0.0);
      CHECK(a <= x + 1e-12);
    }
  }
}

TEST_CASE("value function shape: bounds and monotonicity") {
  const auto sol = solve_monotone_values(kUniform, 25, kFine);
  const auto& v = sol.values.values;
  for (int k = 0; k <= 25; ++k) {
    for (std::size_t j = 0; j < v[k].size(); ++j) {
      CHECK(v[k][j] >= 0.0);
      CHECK(v[k][j] <= static_cast<double>(k) + 1e-12);
      if (j > 0) CHECK(v[k][j] >= v[k][j - 1] - 1e-12);        // more room helps
      if (k > 0) CHECK(v[k][j] >= v[k - 1][j] - 1e-12);        // more time helps
    }
  }
  CHECK(sol.values.warnings.empty());
  // a full-information selector bounds the sequential value
  CHECK(v[25].back() <= std::sqrt(50.0));
  // interpolation reproduces the nodes
  const auto& g = sol.values.grid;
  CHECK(sol.values.value_at(25, g[1000]) == doctest::Approx(v[25][1000]).epsilon(1e-14));
  CHECK(sol.values.value_at(25, 1.0) == doctest::Approx(v[25].back()).epsilon(1e-14));
}

TEST_CASE("pinned level values") {
  const auto sol = solve_monotone_values(kUniform, 25, kFine);
  CHECK(sol.values.values[25].back() == doctest::Approx(6.2721671).epsilon(1e-6));
  const auto k25 = solve_knapsack_values(kUniform, 25, kFine);
  CHECK(k25.values.values[25].back() == doctest::Approx(6.2721671).epsilon(1e-6));
}

TEST_CASE("marginal value of one more observation shrinks") {
  const auto sol = solve_monotone_values(kUniform, 40, kFine);
  double prev_inc = 1e9;
  for (int n = 1; n <= 40; ++n) {
    const double inc = sol.values.values[n].back() - sol.values.values[n - 1].back();
    CHECK(inc <= prev_inc + 1e-7);
    CHECK(inc > 0.0);
    prev_inc = inc;
  }
}

TEST_CASE("grid refinement converges") {
  const auto a = solve_knapsack_values(kUniform, 25, GridSpec{1001, 0.0, 1.0});
  const auto b = solve_knapsack_values(kUniform, 25, kFine);
  CHECK(std::fabs(a.values.values[25].back() - b.values.values[25].back()) <= 2e-3);
}

TEST_CASE("coarse grids trip the curvature warning") {
  const auto sol = solve_monotone_values(kUniform, 10, GridSpec{101, 0.0, 1e-9});
  CHECK_FALSE(sol.values.warnings.empty());
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_knapsack_values(kUniform, 5, GridSpec{51, 0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_monotone_values(kUniform, -1, kCoarse), std::invalid_argument);
}

TEST_CASE("grid cache: roundtrip, key stability, and rejection") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "brx_cache_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const GridSpec spec{501, 0.0, 1.0};
  const auto sol = solve_knapsack_values(kUniform, 5, spec);
  save_grid_cache(dir.string(), kUniform, spec, sol);

  const auto key = grid_cache_key(Problem::knapsack, kUniform, 5, spec);
  CHECK(key == grid_cache_key(Problem::knapsack, kUniform, 5, spec));
  CHECK(key != grid_cache_key(Problem::monotone, kUniform, 5, spec));
  CHECK(key != grid_cache_key(Problem::knapsack, kUniform, 6, spec));
  CHECK(fs::exists(grid_cache_path(dir.string(), key)));

  const auto loaded = load_grid_cache(dir.string(), Problem::knapsack, kUniform, 5, spec);
  REQUIRE(loaded.has_value());
  for (int k = 0; k <= 5; ++k) {
    for (std::size_t j = 0; j < sol.values.values[k].size(); ++j) {
      CHECK(loaded->values.values[k][j] == sol.values.values[k][j]);  // bit-exact
      if (k >= 1) CHECK(loaded->thresholds.alpha[k][j] == sol.thresholds.alpha[k][j]);
    }
  }
  CHECK(loaded->thresholds.alpha[0].empty());  // no decision at stage zero
  CHECK(loaded->values.grid == sol.values.grid);

  // a different spec must miss
  CHECK_FALSE(load_grid_cache(dir.string(), Problem::knapsack, kUniform, 5,
                              GridSpec{601, 0.0, 1.0}).has_value());
  CHECK_FALSE(load_grid_cache(dir.string(), Problem::monotone, kUniform, 5, spec).has_value());

  // corrupted payloads are ignored, not trusted
  {
    std::ofstream f(grid_cache_path(dir.string(), key));
    f << "{\"schema_version\": 1, \"horizon\": ";
  }
  CHECK_FALSE(load_grid_cache(dir.string(), Problem::knapsack, kUniform, 5, spec).has_value());
  fs::remove_all(dir);
}

TEST_CASE("other driving laws stay well behaved") {
  // decreasing density: order-statistic minimum of 3 uniforms
  const auto d = Distribution::beta_order_stat(1, 3);
  const auto sol = solve_knapsack_values(d, 8, GridSpec{801, 0.0, 5e-3});
  const auto& v = sol.values.values;
  for (int k = 1; k <= 8; ++k) {
    CHECK(v[k].back() <= static_cast<double>(k));
    CHECK(v[k].back() >= v[k - 1].back() - 1e-12);
  }
  // more stages help strictly here
  CHECK(v[8].back() > v[1].back());
}
