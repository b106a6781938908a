#include "brx/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace brx {

Problem problem_from_string(const std::string& s) {
  if (s == "knapsack") return Problem::knapsack;
  if (s == "monotone") return Problem::monotone;
  throw std::invalid_argument("problem: expected knapsack|monotone, got '" + s + "'");
}

std::string to_string(Problem p) {
  return p == Problem::knapsack ? "knapsack" : "monotone";
}

namespace {

// linear interpolation on a uniform grid given only the spacing
inline double interp_uniform(std::span<const double> w, double h, double x) {
  const int last = static_cast<int>(w.size()) - 1;
  double pos = x / h;
  int idx = static_cast<int>(pos);
  if (idx < 0) idx = 0;
  if (idx > last - 1) idx = last - 1;
  const double frac = pos - idx;
  return w[idx] + frac * (w[idx + 1] - w[idx]);
}

// leftmost u with w_pl(u) = target; requires w nondecreasing, w[0] < target
// <= w.back(). Exact inversion of the piecewise-linear interpolant.
inline double pl_inverse(std::span<const double> w, double h, double target) {
  const auto it = std::lower_bound(w.begin(), w.end(), target);
  const std::size_t j = static_cast<std::size_t>(it - w.begin());
  if (j == 0) return 0.0;
  if (w[j] == target) return static_cast<double>(j) * h;
  const double frac = (target - w[j - 1]) / (w[j] - w[j - 1]);
  return (static_cast<double>(j - 1) + frac) * h;
}

// The two chains use deliberately different quadratures for the acceptance
// integral so their solved values stay independent checks on one another:
// agreement is then a convergence statement, not an algebraic identity.
// Splitting the stage integral at the indifference root happens in the
// caller, so neither integrand has a max{} kink.

// Knapsack: composite Simpson over consumed capacity y in [a,b] with free
// panel width ~ h of (1 + w_pl(x - y)) * f(y). Panel edges generically miss
// the interpolant's cell boundaries, leaving an O(h^2) signature.
double accept_integral_reflect(const Distribution& dist, std::span<const double> w, double h,
                               double x, double a, double b) {
  const double len = b - a;
  if (!(len > 0.0)) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(len / h)));
  const double hp = len / panels;
  auto g = [&](double y) { return (1.0 + interp_uniform(w, h, x - y)) * dist.density(y); };
  double ends = g(a) + g(b);
  double inner = 0.0;
  double mids = 0.0;
  for (int m = 1; m < panels; ++m) inner += g(a + hp * m);
  for (int m = 0; m < panels; ++m) mids += g(a + hp * (m + 0.5));
  return hp / 6.0 * (ends + 2.0 * inner + 4.0 * mids);
}

// Monotone: integrate (1 + w_pl(z)) * f(z) over observed value z in [a,b],
// split at every cell boundary so w_pl is linear on each piece, Simpson per
// piece (exact for flat densities, high-order otherwise).
double accept_integral_cells(const Distribution& dist, std::span<const double> w, double h,
                             double a, double b) {
  if (!(b - a > 0.0)) return 0.0;
  auto g = [&](double z) { return (1.0 + interp_uniform(w, h, z)) * dist.density(z); };
  double total = 0.0;
  double lo = a;
  std::size_t cell = static_cast<std::size_t>(a / h) + 1;
  double hi = static_cast<double>(cell) * h;
  while (hi < b) {
    if (hi > lo) {
      total += (hi - lo) / 6.0 * (g(lo) + 4.0 * g(0.5 * (lo + hi)) + g(hi));
      lo = hi;
    }
    ++cell;
    hi = static_cast<double>(cell) * h;
  }
  if (b > lo) total += (b - lo) / 6.0 * (g(lo) + 4.0 * g(0.5 * (lo + b)) + g(b));
  return total;
}

struct StageScratch {
  std::vector<double> cdf;  // F at grid points
};

void stage_update_impl(Problem problem, const Distribution& dist,
                       std::span<const double> grid, std::span<const double> cdf,
                       std::span<const double> w, std::span<double> out,
                       std::span<double> alpha_out, std::span<std::uint8_t> clamped_out) {
  const std::size_t G = grid.size();
  const double h = grid[1];
  for (std::size_t j = 0; j < G; ++j) {
    const double x = grid[j];
    const double c = w[j];

    // acceptance window [x - ustar, x] in observed value (monotone) or
    // [0, x - ustar] in consumed capacity (knapsack)
    double ustar;
    bool clamped;
    if (c - 1.0 <= w[0]) {
      ustar = 0.0;
      clamped = true;
    } else {
      ustar = std::min(pl_inverse(w, h, c - 1.0), x);
      clamped = false;
    }
    const double alpha = x - ustar;
    alpha_out[j] = alpha;
    clamped_out[j] = clamped ? 1 : 0;

    const double fx = cdf[j];
    double value = (1.0 - fx) * c;  // observation exceeds the feasible range
    if (problem == Problem::knapsack) {
      const double falpha = dist.cdf(alpha);
      value += c * (fx - falpha);  // feasible but rejected
      value += accept_integral_reflect(dist, w, h, x, 0.0, alpha);
    } else {
      const double fu = dist.cdf(ustar);
      value += c * fu;
      value += accept_integral_cells(dist, w, h, ustar, x);
    }
    out[j] = std::max(value, 0.0);
  }
}

void add_monotonicity_warnings(std::span<const double> row, int stage,
                               std::vector<std::string>& warnings) {
  for (std::size_t j = 0; j + 1 < row.size(); ++j) {
    if (row[j + 1] < row[j] - 1e-9 * std::max(1.0, row[j])) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "stage %d: values decrease across grid index %zu (%.6g -> %.6g)", stage, j,
                    row[j], row[j + 1]);
      warnings.emplace_back(buf);
      return;  // one report per stage is enough
    }
  }
}

BellmanSolution solve_impl(Problem problem, const Distribution& dist, int horizon,
                           const GridSpec& spec) {
  if (horizon < 0) throw std::invalid_argument("bellman: horizon must be >= 0");
  if (spec.points < 101) throw std::invalid_argument("bellman: grid points must be >= 101");
  const double xmax = spec.x_max > 0.0 ? spec.x_max : dist.effective_upper();
  if (!(xmax > 0.0) || !std::isfinite(xmax)) {
    throw std::invalid_argument("bellman: state upper end must be finite and > 0");
  }

  const std::size_t G = static_cast<std::size_t>(spec.points);
  const double h = xmax / static_cast<double>(G - 1);

  BellmanSolution sol;
  auto& vf = sol.values;
  vf.problem = problem;
  vf.horizon = horizon;
  vf.grid.resize(G);
  for (std::size_t j = 0; j < G; ++j) vf.grid[j] = h * static_cast<double>(j);
  vf.values.assign(static_cast<std::size_t>(horizon) + 1, {});
  vf.values[0].assign(G, 0.0);
  sol.thresholds.alpha.assign(static_cast<std::size_t>(horizon) + 1, {});
  sol.thresholds.clamped.assign(static_cast<std::size_t>(horizon) + 1, {});

  std::vector<double> cdf(G);
  for (std::size_t j = 0; j < G; ++j) cdf[j] = dist.cdf(vf.grid[j]);

  for (int k = 1; k <= horizon; ++k) {
    vf.values[k].assign(G, 0.0);
    sol.thresholds.alpha[k].assign(G, 0.0);
    sol.thresholds.clamped[k].assign(G, 0);
    stage_update_impl(problem, dist, vf.grid, cdf, vf.values[k - 1], vf.values[k],
                      sol.thresholds.alpha[k], sol.thresholds.clamped[k]);
    add_monotonicity_warnings(vf.values[k], k, vf.warnings);
  }

  // curvature-based estimate of the piecewise-linear representation error
  if (horizon >= 1) {
    double est = 0.0;
    const auto& top = vf.values[horizon];
    for (std::size_t j = 1; j + 1 < G; ++j) {
      est = std::max(est, std::fabs(top[j + 1] - 2.0 * top[j] + top[j - 1]) / 8.0);
    }
    if (est > spec.tolerance) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "grid resolution: interpolation error estimate %.3g exceeds tolerance %.3g",
                    est, spec.tolerance);
      vf.warnings.emplace_back(buf);
    }
  }
  return sol;
}

}  // namespace

double ValueFunctionGrid::value_at(int stage, double x) const {
  if (stage < 0 || stage > horizon) throw std::invalid_argument("value_at: stage out of range");
  const double xc = std::clamp(x, 0.0, upper());
  return interp_uniform(values[stage], spacing(), xc);
}

double BellmanSolution::alpha_at(int stage, double x) const {
  if (stage < 1 || stage > values.horizon) {
    throw std::invalid_argument("alpha_at: stage out of range");
  }
  const double xc = std::clamp(x, 0.0, values.upper());
  return std::clamp(interp_uniform(thresholds.alpha[stage], values.spacing(), xc), 0.0, xc);
}

BellmanSolution solve_knapsack_values(const Distribution& dist, int horizon,
                                      const GridSpec& spec) {
  return solve_impl(Problem::knapsack, dist, horizon, spec);
}

BellmanSolution solve_monotone_values(const Distribution& dist, int horizon,
                                      const GridSpec& spec) {
  return solve_impl(Problem::monotone, dist, horizon, spec);
}

void bellman_stage_update(Problem problem, const Distribution& dist,
                          std::span<const double> grid, std::span<const double> w,
                          std::span<double> out, std::span<double> alpha_out,
                          std::span<std::uint8_t> clamped_out) {
  if (grid.size() < 2 || w.size() != grid.size() || out.size() != grid.size() ||
      alpha_out.size() != grid.size() || clamped_out.size() != grid.size()) {
    throw std::invalid_argument("bellman_stage_update: span sizes must match the grid");
  }
  std::vector<double> cdf(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) cdf[j] = dist.cdf(grid[j]);
  stage_update_impl(problem, dist, grid, cdf, w, out, alpha_out, clamped_out);
}

std::pair<double, bool> indifference_threshold(const ValueFunctionGrid& vals, int stage,
                                               double x) {
  if (stage < 1 || stage > vals.horizon) {
    throw std::invalid_argument("indifference_threshold: stage out of range");
  }
  const double xc = std::clamp(x, 0.0, vals.upper());
  const auto& w = vals.values[stage - 1];
  const double c = interp_uniform(w, vals.spacing(), xc);
  if (c - 1.0 <= w[0]) return {xc, true};
  const double ustar = std::min(pl_inverse(w, vals.spacing(), c - 1.0), xc);
  return {xc - ustar, false};
}

double value_equality_gap(int horizon, const GridSpec& spec) {
  const auto dist = Distribution::uniform_scaled(1.0);
  const auto k = solve_knapsack_values(dist, horizon, spec);
  const auto m = solve_monotone_values(dist, horizon, spec);
  double gap = 0.0;
  for (int s = 0; s <= horizon; ++s) {
    const auto& a = k.values.values[s];
    const auto& b = m.values.values[s];
    for (std::size_t j = 0; j < a.size(); ++j) {
      gap = std::max(gap, std::fabs(a[j] - b[j]));
    }
  }
  return gap;
}

}  // namespace brx
