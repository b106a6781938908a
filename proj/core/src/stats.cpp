#include "brx/stats.hpp"

#include <algorithm>
#include <cmath>

#include "brx/special.hpp"

namespace brx {

void RunningMoments::add(double x) {
  const double n1 = static_cast<double>(n);
  ++n;
  const double nn = static_cast<double>(n);
  const double delta = x - mean;
  const double delta_n = delta / nn;
  const double delta_n2 = delta_n * delta_n;
  const double term1 = delta * delta_n * n1;
  mean += delta_n;
  m4 += term1 * delta_n2 * (nn * nn - 3.0 * nn + 3.0) + 6.0 * delta_n2 * m2 -
        4.0 * delta_n * m3;
  m3 += term1 * delta_n * (nn - 2.0) - 3.0 * delta_n * m2;
  m2 += term1;
}

void RunningMoments::merge(const RunningMoments& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(o.n);
  const double nx = na + nb;
  const double delta = o.mean - mean;
  const double d2 = delta * delta;

  const double m4x = m4 + o.m4 +
                     d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (nx * nx * nx) +
                     6.0 * d2 * (na * na * o.m2 + nb * nb * m2) / (nx * nx) +
                     4.0 * delta * (na * o.m3 - nb * m3) / nx;
  const double m3x = m3 + o.m3 + d2 * delta * na * nb * (na - nb) / (nx * nx) +
                     3.0 * delta * (na * o.m2 - nb * m2) / nx;
  const double m2x = m2 + o.m2 + d2 * na * nb / nx;

  mean += delta * nb / nx;
  m2 = m2x;
  m3 = m3x;
  m4 = m4x;
  n += o.n;
}

double RunningMoments::std_error() const {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

double RunningMoments::variance_std_error() const {
  if (n < 2) return 0.0;
  const double s2 = variance();
  const double nn = static_cast<double>(n);
  const double var_of_var =
      (fourth_central() - (nn - 3.0) / (nn - 1.0) * s2 * s2) / nn;
  return std::sqrt(std::max(0.0, var_of_var));
}

HistMoments hist_moments(const CountHistogram& hist) {
  HistMoments m;
  double sum = 0.0;
  for (const auto& [k, c] : hist) {
    m.n += c;
    sum += static_cast<double>(k) * static_cast<double>(c);
  }
  if (m.n == 0) return m;
  const double nn = static_cast<double>(m.n);
  m.mean = sum / nn;
  double s2 = 0.0, s4 = 0.0;
  for (const auto& [k, c] : hist) {
    const double d = static_cast<double>(k) - m.mean;
    const double w = static_cast<double>(c);
    s2 += w * d * d;
    s4 += w * d * d * d * d;
  }
  m.variance = m.n > 1 ? s2 / (nn - 1.0) : 0.0;
  m.fourth_central = s4 / nn;
  m.std_error = m.n > 1 ? std::sqrt(m.variance / nn) : 0.0;
  if (m.n > 1) {
    const double var_of_var =
        (m.fourth_central - (nn - 3.0) / (nn - 1.0) * m.variance * m.variance) / nn;
    m.variance_std_error = std::sqrt(std::max(0.0, var_of_var));
  }
  return m;
}

ChiSquareResult two_sample_chi_square(const CountHistogram& a, const CountHistogram& b,
                                      double min_expected) {
  // union of support, in key order
  std::vector<std::pair<long long, long long>> cells;  // (count_a, count_b)
  {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
      if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
        cells.emplace_back(ia->second, 0);
        ++ia;
      } else if (ia == a.end() || ib->first < ia->first) {
        cells.emplace_back(0, ib->second);
        ++ib;
      } else {
        cells.emplace_back(ia->second, ib->second);
        ++ia;
        ++ib;
      }
    }
  }
  double na = 0.0, nb = 0.0;
  for (const auto& [ca, cb] : cells) {
    na += static_cast<double>(ca);
    nb += static_cast<double>(cb);
  }
  const double ntot = na + nb;
  if (na == 0.0 || nb == 0.0) return {};

  // pool adjacent cells until both expected counts clear the floor
  std::vector<std::pair<double, double>> groups;
  double ga = 0.0, gb = 0.0;
  for (const auto& [ca, cb] : cells) {
    ga += static_cast<double>(ca);
    gb += static_cast<double>(cb);
    const double rowsum = ga + gb;
    if (na * rowsum / ntot >= min_expected && nb * rowsum / ntot >= min_expected) {
      groups.emplace_back(ga, gb);
      ga = gb = 0.0;
    }
  }
  if (ga + gb > 0.0) {
    if (groups.empty()) {
      groups.emplace_back(ga, gb);
    } else {
      groups.back().first += ga;
      groups.back().second += gb;
    }
  }
  if (groups.size() < 2) return {};

  double stat = 0.0;
  for (const auto& [ca, cb] : groups) {
    const double rowsum = ca + cb;
    const double ea = na * rowsum / ntot;
    const double eb = nb * rowsum / ntot;
    stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  const int df = static_cast<int>(groups.size()) - 1;
  return {stat, df, chi_square_sf(stat, df)};
}

double two_sample_mean_z(const RunningMoments& a, const RunningMoments& b) {
  const double se = std::sqrt(a.std_error() * a.std_error() + b.std_error() * b.std_error());
  if (se == 0.0) return 0.0;
  return (a.mean - b.mean) / se;
}

double two_sample_variance_z(const RunningMoments& a, const RunningMoments& b) {
  const double sa = a.variance_std_error();
  const double sb = b.variance_std_error();
  const double se = std::sqrt(sa * sa + sb * sb);
  if (se == 0.0) return 0.0;
  return (a.variance() - b.variance()) / se;
}

double two_sample_mean_z(const HistMoments& a, const HistMoments& b) {
  const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  if (se == 0.0) return 0.0;
  return (a.mean - b.mean) / se;
}

double two_sample_variance_z(const HistMoments& a, const HistMoments& b) {
  const double se = std::sqrt(a.variance_std_error * a.variance_std_error +
                              b.variance_std_error * b.variance_std_error);
  if (se == 0.0) return 0.0;
  return (a.variance - b.variance) / se;
}

double ks_statistic(const std::vector<double>& cdf_at_sorted) {
  const double n = static_cast<double>(cdf_at_sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < cdf_at_sorted.size(); ++i) {
    const double f = cdf_at_sorted[i];
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return d;
}

double ks_to_normal(const CountHistogram& hist, long long total, double mu, double sigma,
                    bool midpoint) {
  double d = 0.0;
  double cum = 0.0;
  const double nn = static_cast<double>(total);
  for (const auto& [k, c] : hist) {
    const double before = cum / nn;
    cum += static_cast<double>(c);
    const double after = cum / nn;
    if (midpoint) {
      // empirical mass through k sits at the half-integer boundary k + 1/2
      const double f = normal_cdf((static_cast<double>(k) + 0.5 - mu) / sigma);
      d = std::max(d, std::fabs(after - f));
    } else {
      const double f = normal_cdf((static_cast<double>(k) - mu) / sigma);
      d = std::max(d, std::fabs(before - f));
      d = std::max(d, std::fabs(after - f));
    }
  }
  return d;
}

}  // namespace brx
