#include "brx/threshold.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace brx {

namespace {

double partial_mean_sum(std::span<const Distribution> marginals, double t) {
  double s = 0.0;
  for (const auto& m : marginals) s += m.partial_mean(t);
  return s;
}

}  // namespace

ThresholdSolution solve_threshold(std::span<const Distribution> marginals, double budget) {
  if (marginals.empty()) throw std::invalid_argument("solve_threshold: no marginals");
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw std::invalid_argument("solve_threshold: budget must be finite and > 0");
  }

  double hi = 0.0;
  double total_mean = 0.0;
  for (const auto& m : marginals) {
    hi = std::max(hi, m.effective_upper());
    total_mean += m.mean();
  }

  ThresholdSolution sol;
  if (total_mean <= budget) {
    sol.saturated = true;
    sol.t = std::numeric_limits<double>::infinity();
    sol.bound = static_cast<double>(marginals.size());
    return sol;
  }

  // g is continuous and nondecreasing with g(0) = -budget < 0 <= g(hi);
  // bisect the bracket down to machine width, then keep the endpoint with
  // the smaller residual
  double lo = 0.0, glo = -budget;
  double ghi = total_mean - budget;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // bracket exhausted in fp
    ++sol.iterations;
    const double gm = partial_mean_sum(marginals, mid) - budget;
    if (gm >= 0.0) {
      hi = mid;
      ghi = gm;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  if (std::fabs(glo) < std::fabs(ghi)) {
    sol.t = lo;
    sol.residual = glo;
  } else {
    sol.t = hi;
    sol.residual = ghi;
  }
  double bound = 0.0;
  for (const auto& m : marginals) bound += m.cdf(sol.t);
  sol.bound = bound;
  return sol;
}

double br_bound(std::span<const Distribution> marginals, double budget) {
  return solve_threshold(marginals, budget).bound;
}

}  // namespace brx
