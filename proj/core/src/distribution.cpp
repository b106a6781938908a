#include "brx/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "brx/special.hpp"

namespace brx {

Distribution Distribution::uniform_scaled(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw std::invalid_argument("uniform_scaled: upper end b must be finite and > 0");
  }
  Distribution d;
  d.kind_ = DistKind::uniform_scaled;
  d.b_ = b;
  return d;
}

Distribution Distribution::beta_order_stat(int i, int n) {
  if (n < 1 || i < 1 || i > n) {
    throw std::invalid_argument("beta_order_stat: need 1 <= i <= n");
  }
  Distribution d;
  d.kind_ = DistKind::beta_order_stat;
  d.beta_i_ = i;
  d.beta_n_ = n;
  return d;
}

Distribution Distribution::tabulated(std::vector<double> knots, std::vector<double> cdf_values) {
  if (knots.size() != cdf_values.size() || knots.size() < 2) {
    throw std::invalid_argument("tabulated: need matching knot/cdf arrays of length >= 2");
  }
  if (!(knots.front() >= 0.0)) {
    throw std::invalid_argument("tabulated: support must lie in [0, inf)");
  }
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    if (!(knots[j + 1] > knots[j])) {
      throw std::invalid_argument("tabulated: knots must be strictly increasing");
    }
    if (cdf_values[j + 1] < cdf_values[j]) {
      throw std::invalid_argument("tabulated: cdf values must be nondecreasing");
    }
  }
  if (cdf_values.front() != 0.0 || cdf_values.back() != 1.0) {
    throw std::invalid_argument("tabulated: cdf must run from 0 at the first knot to 1 at the last");
  }
  Distribution d;
  d.kind_ = DistKind::tabulated;
  d.knots_ = std::move(knots);
  d.cdf_ = std::move(cdf_values);
  d.pm_prefix_.assign(d.knots_.size(), 0.0);
  for (std::size_t j = 0; j + 1 < d.knots_.size(); ++j) {
    const double slope = (d.cdf_[j + 1] - d.cdf_[j]) / (d.knots_[j + 1] - d.knots_[j]);
    d.pm_prefix_[j + 1] =
        d.pm_prefix_[j] + slope * 0.5 * (d.knots_[j + 1] * d.knots_[j + 1] - d.knots_[j] * d.knots_[j]);
  }
  return d;
}

double Distribution::cdf(double t) const {
  switch (kind_) {
    case DistKind::uniform_scaled:
      if (t <= 0.0) return 0.0;
      if (t >= b_) return 1.0;
      return t / b_;
    case DistKind::beta_order_stat:
      return reg_inc_beta(beta_i_, beta_n_ - beta_i_ + 1, t);
    case DistKind::tabulated: {
      if (t <= knots_.front()) return 0.0;
      if (t >= knots_.back()) return 1.0;
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
      const std::size_t j = static_cast<std::size_t>(it - knots_.begin()) - 1;
      const double w = (t - knots_[j]) / (knots_[j + 1] - knots_[j]);
      return cdf_[j] + w * (cdf_[j + 1] - cdf_[j]);
    }
  }
  return 0.0;
}

double Distribution::density(double t) const {
  switch (kind_) {
    case DistKind::uniform_scaled:
      return (t >= 0.0 && t <= b_) ? 1.0 / b_ : 0.0;
    case DistKind::beta_order_stat: {
      if (t <= 0.0 || t >= 1.0) {
        // endpoint values: Beta(1,n) is n at 0, Beta(n,1) is n at 1
        if (t == 0.0 && beta_i_ == 1) return static_cast<double>(beta_n_);
        if (t == 1.0 && beta_i_ == beta_n_) return static_cast<double>(beta_n_);
        return 0.0;
      }
      const double a = beta_i_;
      const double b = beta_n_ - beta_i_ + 1;
      return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) - log_beta(a, b));
    }
    case DistKind::tabulated: {
      if (t < knots_.front() || t > knots_.back()) return 0.0;
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
      if (it == knots_.end()) --it;  // t at the last knot: use the last piece
      std::size_t j = static_cast<std::size_t>(it - knots_.begin());
      j = (j == 0) ? 0 : j - 1;
      return (cdf_[j + 1] - cdf_[j]) / (knots_[j + 1] - knots_[j]);
    }
  }
  return 0.0;
}

double Distribution::quantile(double p) const {
  if (p < 0.0 || p > 1.0 || !std::isfinite(p)) {
    throw std::invalid_argument("quantile: p must lie in [0,1]");
  }
  switch (kind_) {
    case DistKind::uniform_scaled:
      return p * b_;
    case DistKind::beta_order_stat:
      return reg_inc_beta_inv(beta_i_, beta_n_ - beta_i_ + 1, p);
    case DistKind::tabulated: {
      if (p <= 0.0) return knots_.front();
      if (p >= 1.0) return knots_.back();
      const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), p);
      const std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
      if (j == 0) return knots_.front();
      if (cdf_[j] == cdf_[j - 1]) return knots_[j - 1];
      const double w = (p - cdf_[j - 1]) / (cdf_[j] - cdf_[j - 1]);
      return knots_[j - 1] + w * (knots_[j] - knots_[j - 1]);
    }
  }
  return 0.0;
}

double Distribution::partial_mean(double t) const {
  if (t <= 0.0) return 0.0;
  switch (kind_) {
    case DistKind::uniform_scaled: {
      const double u = std::min(t, b_);
      return 0.5 * u * u / b_;
    }
    case DistKind::beta_order_stat: {
      // integral of x dBeta(a,b) over [0,t] = mean * I_t(a+1, b)
      const double a = beta_i_;
      const double b = beta_n_ - beta_i_ + 1;
      if (t >= 1.0) return a / (a + b);
      return a / (a + b) * reg_inc_beta(a + 1.0, b, t);
    }
    case DistKind::tabulated: {
      if (t >= knots_.back()) return pm_prefix_.back();
      if (t <= knots_.front()) return 0.0;
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
      const std::size_t j = static_cast<std::size_t>(it - knots_.begin()) - 1;
      const double slope = (cdf_[j + 1] - cdf_[j]) / (knots_[j + 1] - knots_[j]);
      return pm_prefix_[j] + slope * 0.5 * (t * t - knots_[j] * knots_[j]);
    }
  }
  return 0.0;
}

double Distribution::mean() const {
  switch (kind_) {
    case DistKind::uniform_scaled:
      return 0.5 * b_;
    case DistKind::beta_order_stat:
      return static_cast<double>(beta_i_) / (beta_n_ + 1);
    case DistKind::tabulated:
      return pm_prefix_.back();
  }
  return 0.0;
}

double Distribution::support_upper() const {
  switch (kind_) {
    case DistKind::uniform_scaled:
      return b_;
    case DistKind::beta_order_stat:
      return 1.0;
    case DistKind::tabulated:
      return knots_.back();
  }
  return 0.0;
}

double Distribution::effective_upper() const {
  const double u = support_upper();
  return std::isfinite(u) ? u : quantile(1.0 - 1e-12);
}

std::string Distribution::describe() const {
  char buf[64];
  switch (kind_) {
    case DistKind::uniform_scaled:
      std::snprintf(buf, sizeof buf, "uniform:b=%.17g", b_);
      return buf;
    case DistKind::beta_order_stat:
      std::snprintf(buf, sizeof buf, "beta_order:i=%d,n=%d", beta_i_, beta_n_);
      return buf;
    case DistKind::tabulated: {
      std::string s = "tabulated:";
      for (std::size_t j = 0; j < knots_.size(); ++j) {
        std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", knots_[j], cdf_[j]);
        s += buf;
      }
      return s;
    }
  }
  return "?";
}

bool Distribution::is_beta_order(int i, int n) const {
  return kind_ == DistKind::beta_order_stat && beta_i_ == i && beta_n_ == n;
}

std::vector<Distribution> replicate(const Distribution& d, int n) {
  if (n < 1) throw std::invalid_argument("replicate: n must be >= 1");
  return std::vector<Distribution>(static_cast<std::size_t>(n), d);
}

std::vector<double> sample_batch(std::span<const Distribution> marginals, Coupling coupling,
                                 Rng& rng) {
  const std::size_t n = marginals.size();
  std::vector<double> out(n);
  switch (coupling) {
    case Coupling::independent:
      for (std::size_t i = 0; i < n; ++i) out[i] = marginals[i].quantile(rng.next_double());
      break;
    case Coupling::comonotone: {
      const double u = rng.next_double();
      for (std::size_t i = 0; i < n; ++i) out[i] = marginals[i].quantile(u);
      break;
    }
    case Coupling::order_statistics: {
      std::vector<double> u(n);
      for (auto& v : u) v = rng.next_double();
      std::sort(u.begin(), u.end());
      for (std::size_t i = 0; i < n; ++i) {
        const int pos = static_cast<int>(i) + 1;
        if (marginals[i].is_beta_order(pos, static_cast<int>(n))) {
          // the i-th sorted uniform already has this marginal
          out[i] = u[i];
        } else {
          // rank transform: U_(i) ~ Beta(i, n-i+1), push through its CDF to
          // get a uniform, then through the target quantile
          const double p = reg_inc_beta(pos, static_cast<double>(n) - pos + 1.0, u[i]);
          out[i] = marginals[i].quantile(p);
        }
      }
      break;
    }
  }
  return out;
}

Coupling coupling_from_string(const std::string& s) {
  if (s == "independent") return Coupling::independent;
  if (s == "comonotone") return Coupling::comonotone;
  if (s == "order_statistics") return Coupling::order_statistics;
  throw std::invalid_argument("coupling: expected independent|comonotone|order_statistics, got '" + s + "'");
}

std::string to_string(Coupling c) {
  switch (c) {
    case Coupling::independent: return "independent";
    case Coupling::comonotone: return "comonotone";
    case Coupling::order_statistics: return "order_statistics";
  }
  return "?";
}

}  // namespace brx
