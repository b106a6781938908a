#include <benchmark/benchmark.h>

#include <vector>

#include "brx/bellman.hpp"
#include "brx/distribution.hpp"
#include "brx/rng.hpp"
#include "brx/selection.hpp"
#include "brx/simulate.hpp"
#include "brx/special.hpp"
#include "brx/threshold.hpp"

namespace {

using namespace brx;

void BM_MaximalFunction(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(42);
  std::vector<double> xs(n);
  for (auto& x : xs) x = rng.next_double();
  for (auto _ : state) {
    benchmark::DoNotOptimize(maximal_function(xs, 1.0));
  }
}
BENCHMARK(BM_MaximalFunction)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SolveThreshold(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<Distribution> marginals;
  for (int i = 1; i <= n; ++i) marginals.push_back(Distribution::uniform_scaled(i));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_threshold(marginals, 1.0));
  }
}
BENCHMARK(BM_SolveThreshold)->Arg(10)->Arg(100);

void BM_MonotoneStage(benchmark::State& state) {
  const int points = static_cast<int>(state.range(0));
  const auto dist = Distribution::uniform_scaled(1.0);
  const auto sol = solve_monotone_values(dist, 1, GridSpec{points, 0.0, 1.0});
  std::vector<double> grid = sol.values.grid;
  std::vector<double> w = sol.values.values[1];
  std::vector<double> out(w.size()), alpha(w.size());
  std::vector<unsigned char> clamped(w.size());
  for (auto _ : state) {
    bellman_stage_update(Problem::monotone, dist, grid, w, out, alpha, clamped);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_MonotoneStage)->Arg(501)->Arg(2001);

void BM_SimulateRep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto dist = Distribution::uniform_scaled(1.0);
  const auto sol = solve_knapsack_values(dist, n, GridSpec{501, 0.0, 1.0});
  const Rng base(7);
  std::uint64_t r = 0;
  for (auto _ : state) {
    Rng rng = base.split(r++);
    benchmark::DoNotOptimize(simulate_count(sol, dist, n, 1.0, rng));
  }
}
BENCHMARK(BM_SimulateRep)->Arg(25)->Arg(200);

void BM_IncBeta(benchmark::State& state) {
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-6;
    if (x >= 1.0) x = 1e-6;
    benchmark::DoNotOptimize(reg_inc_beta(3.0, 8.0, x));
  }
}
BENCHMARK(BM_IncBeta);

}  // namespace

BENCHMARK_MAIN();
