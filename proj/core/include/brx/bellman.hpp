#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brx/distribution.hpp"

namespace brx {

// The two sequential selection problems sharing one backward induction:
// knapsack keeps a running capacity (accepted values are subtracted),
// monotone keeps a running upper edge (accepted values become the new edge,
// selections decrease). Stage index k counts observations still to come.
enum class Problem { knapsack, monotone };

Problem problem_from_string(const std::string& s);
std::string to_string(Problem p);

struct GridSpec {
  int points = 2001;       // >= 101
  double x_max = 0.0;      // <= 0: use the marginal's effective upper end
  double tolerance = 5e-4; // grid-resolution warning threshold
};

struct ValueFunctionGrid {
  Problem problem = Problem::knapsack;
  int horizon = 0;
  std::vector<double> grid;                 // uniform spacing, grid[0] = 0
  std::vector<std::vector<double>> values;  // values[k][j], k = 0..horizon
  std::vector<std::string> warnings;

  double spacing() const { return grid.size() > 1 ? grid[1] : 0.0; }
  double upper() const { return grid.empty() ? 0.0 : grid.back(); }
  double value_at(int stage, double x) const;  // piecewise linear in x
};

// Acceptance-window widths: with k observations to go in state x the policy
// accepts values in a window of width alpha[k] — [0, alpha] for knapsack,
// [x - alpha, x] for monotone. clamped marks states where the whole
// feasible interval is accepted (the indifference equation has no interior
// root). Row 0 is unused.
struct ThresholdTable {
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<std::uint8_t>> clamped;
};

struct BellmanSolution {
  ValueFunctionGrid values;
  ThresholdTable thresholds;

  double alpha_at(int stage, double x) const;
};

BellmanSolution solve_knapsack_values(const Distribution& dist, int horizon,
                                      const GridSpec& spec);
BellmanSolution solve_monotone_values(const Distribution& dist, int horizon,
                                      const GridSpec& spec);

// One backward-induction step: from stage values w on `grid`, fill `out`
// with the next stage and record the acceptance-window row. Exposed so the
// two update kernels can be tested against each other directly.
void bellman_stage_update(Problem problem, const Distribution& dist,
                          std::span<const double> grid, std::span<const double> w,
                          std::span<double> out, std::span<double> alpha_out,
                          std::span<std::uint8_t> clamped_out);

// Window width solving w(x) - 1 = w(x - alpha) with w the stage values one
// step below `stage`; returns (x, true) when the equation clamps at the
// boundary (everything feasible is accepted).
std::pair<double, bool> indifference_threshold(const ValueFunctionGrid& vals, int stage,
                                               double x);

// Max over stages and grid points of |v_k - vtilde_k| for uniform(0,1)
// marginals, where the two problems' values coincide exactly.
double value_equality_gap(int horizon, const GridSpec& spec);

}  // namespace brx
