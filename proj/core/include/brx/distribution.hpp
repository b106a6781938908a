#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "brx/rng.hpp"

namespace brx {

enum class DistKind { uniform_scaled, beta_order_stat, tabulated };

// How a batch X_1..X_n is drawn from its marginals.
enum class Coupling {
  independent,       // X_i = Q_i(U_i), independent U_i
  comonotone,        // X_i = Q_i(U), one shared U
  order_statistics,  // X_i = Q_i(G_{i,n}(U_(i))), U_(i) the i-th sorted uniform
};

// One marginal law on [0, upper]. Closed under the three shapes the engine
// needs: a uniform on [0,b], the i-th of n uniform order statistics
// (Beta(i, n-i+1)), and a piecewise-linear CDF given by knots.
class Distribution {
 public:
  static Distribution uniform_scaled(double b);
  static Distribution beta_order_stat(int i, int n);
  // knots strictly increasing starting at the left support end; cdf values
  // nondecreasing from 0 to 1 (no atoms: strict knots, flat pieces allowed)
  static Distribution tabulated(std::vector<double> knots, std::vector<double> cdf_values);

  DistKind kind() const { return kind_; }
  double cdf(double t) const;
  double density(double t) const;
  double quantile(double p) const;
  // partial first moment over the lower tail: integral of x dF(x) on [0, t]
  double partial_mean(double t) const;
  double mean() const;
  double support_upper() const;
  // finite state-space cap for grids: the support end when it is finite,
  // otherwise the (1 - 1e-12) quantile
  double effective_upper() const;
  std::string describe() const;

  // true when this marginal is exactly the i-th of n order statistics, the
  // case where the order-statistics coupling degenerates to sorted uniforms
  bool is_beta_order(int i, int n) const;

 private:
  Distribution() = default;

  DistKind kind_ = DistKind::uniform_scaled;
  double b_ = 1.0;                  // uniform upper end
  int beta_i_ = 0, beta_n_ = 0;     // order-statistic parameters
  std::vector<double> knots_;       // tabulated
  std::vector<double> cdf_;
  std::vector<double> pm_prefix_;   // partial mean at each knot
};

// n identical marginals.
std::vector<Distribution> replicate(const Distribution& d, int n);

// Draw one batch under the given coupling, consuming `rng`.
std::vector<double> sample_batch(std::span<const Distribution> marginals, Coupling coupling,
                                 Rng& rng);

Coupling coupling_from_string(const std::string& s);
std::string to_string(Coupling c);

}  // namespace brx
