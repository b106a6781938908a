#pragma once

#include <span>

#include "brx/distribution.hpp"

namespace brx {

// Root of g(t) = sum_i integral_0^t x dF_i(x) - budget, and the expected-count
// bound sum_i F_i(t) it certifies. When the total mean already fits the
// budget the constraint is slack: t = +inf and the bound degenerates to n.
struct ThresholdSolution {
  double t = 0.0;
  double bound = 0.0;
  double residual = 0.0;  // g at the returned t (0 when saturated by convention)
  int iterations = 0;
  bool saturated = false;
};

ThresholdSolution solve_threshold(std::span<const Distribution> marginals, double budget);

// Convenience: just the expected-count bound.
double br_bound(std::span<const Distribution> marginals, double budget);

}  // namespace brx
