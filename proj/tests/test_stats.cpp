#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "brx/rng.hpp"
#include "brx/stats.hpp"

using namespace brx;

namespace {

// two-pass reference moments
struct Direct {
  double mean = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

Direct direct_moments(const std::vector<double>& xs) {
  Direct d;
  for (double x : xs) d.mean += x;
  d.mean /= static_cast<double>(xs.size());
  for (double x : xs) {
    const double c = x - d.mean;
    d.m2 += c * c;
    d.m3 += c * c * c;
    d.m4 += c * c * c * c;
  }
  return d;
}

}  // namespace

TEST_CASE("running moments match a two-pass reference") {
  Rng r(1);
  std::vector<double> xs;
  RunningMoments rm;
  for (int i = 0; i < 5000; ++i) {
    const double x = 3.0 * r.next_double() - 1.0;
    xs.push_back(x);
    rm.add(x);
  }
  const Direct d = direct_moments(xs);
  CHECK(rm.n == 5000);
  CHECK(rm.mean == doctest::Approx(d.mean).epsilon(1e-12));
  CHECK(rm.m2 == doctest::Approx(d.m2).epsilon(1e-10));
  CHECK(rm.m3 == doctest::Approx(d.m3).epsilon(1e-8));
  CHECK(rm.m4 == doctest::Approx(d.m4).epsilon(1e-8));
  CHECK(rm.variance() == doctest::Approx(d.m2 / 4999.0).epsilon(1e-10));
}

TEST_CASE("merging partial accumulators equals one pass") {
  Rng r(2);
  RunningMoments whole, a, b, c;
  for (int i = 0; i < 3000; ++i) {
    const double x = r.next_double() * r.next_double();
    whole.add(x);
    (i < 1000 ? a : i < 1700 ? b : c).add(x);
  }
  RunningMoments ab = a;
  ab.merge(b);
  ab.merge(c);
  CHECK(ab.n == whole.n);
  CHECK(ab.mean == doctest::Approx(whole.mean).epsilon(1e-13));
  CHECK(ab.m2 == doctest::Approx(whole.m2).epsilon(1e-11));
  CHECK(ab.m4 == doctest::Approx(whole.m4).epsilon(1e-9));

  // associativity of the merge order
  RunningMoments bc = b;
  bc.merge(c);
  RunningMoments abc = a;
  abc.merge(bc);
  CHECK(abc.mean == doctest::Approx(ab.mean).epsilon(1e-13));
  CHECK(abc.m2 == doctest::Approx(ab.m2).epsilon(1e-11));
}

TEST_CASE("histogram moments agree with the expanded sample") {
  CountHistogram h;
  h[0] = 10;
  h[1] = 200;
  h[2] = 310;
  h[3] = 55;
  h[7] = 2;
  RunningMoments rm;
  for (const auto& [k, cnt] : h) {
    for (long long i = 0; i < cnt; ++i) rm.add(static_cast<double>(k));
  }
  const auto hm = hist_moments(h);
  CHECK(hm.n == rm.n);
  CHECK(hm.mean == doctest::Approx(rm.mean).epsilon(1e-13));
  CHECK(hm.variance == doctest::Approx(rm.variance()).epsilon(1e-12));
  CHECK(hm.fourth_central == doctest::Approx(rm.fourth_central()).epsilon(1e-11));
  CHECK(hm.std_error == doctest::Approx(rm.std_error()).epsilon(1e-12));
}

TEST_CASE("two-sample chi-square: identical histograms are a perfect fit") {
  CountHistogram h;
  h[1] = 500;
  h[2] = 400;
  h[3] = 100;
  const auto res = two_sample_chi_square(h, h);
  CHECK(res.statistic == doctest::Approx(0.0));
  CHECK(res.p_value == doctest::Approx(1.0));
  CHECK(res.df >= 1);
}

TEST_CASE("two-sample chi-square pools sparse cells") {
  CountHistogram a, b;
  a[0] = 1000;
  a[1] = 1000;
  a[10] = 1;  // sparse tail must get pooled, not spawn its own cell
  b[0] = 1000;
  b[1] = 1001;
  const auto res = two_sample_chi_square(a, b);
  CHECK(res.df == 1);  // three raw cells pool to two groups
  CHECK(res.p_value > 0.5);
  CHECK(std::isfinite(res.statistic));
}

TEST_CASE("two-sample chi-square detects a gross difference") {
  CountHistogram a, b;
  a[0] = 900;
  a[1] = 100;
  b[0] = 100;
  b[1] = 900;
  const auto res = two_sample_chi_square(a, b);
  CHECK(res.p_value < 1e-10);
}

TEST_CASE("z-tests: equal summaries give z = 0") {
  CountHistogram h;
  h[0] = 300;
  h[1] = 500;
  h[2] = 200;
  const auto ma = hist_moments(h);
  CHECK(two_sample_mean_z(ma, ma) == doctest::Approx(0.0));
  CHECK(two_sample_variance_z(ma, ma) == doctest::Approx(0.0));
}

TEST_CASE("z-tests flag a shifted sample") {
  CountHistogram a, b;
  a[0] = 5000;
  a[1] = 5000;
  b[0] = 4000;
  b[1] = 6000;
  const double z = two_sample_mean_z(hist_moments(a), hist_moments(b));
  CHECK(std::fabs(z) > 10.0);
}

TEST_CASE("one-sample KS statistic") {
  // perfectly spaced uniform quantiles: D = 1/(2m) for cdf values (i+0.5)/m
  std::vector<double> u;
  const int m = 100;
  for (int i = 0; i < m; ++i) u.push_back((i + 0.5) / m);
  CHECK(ks_statistic(u) == doctest::Approx(0.005).epsilon(1e-12));

  // all mass on one side
  std::vector<double> bad(50, 0.999);
  CHECK(ks_statistic(bad) > 0.9);
}

TEST_CASE("KS to a normal reference: midpoint variant sees through the lattice") {
  // integer lattice sample from a binomial(40, 1/2), a near-normal lattice law
  Rng r(77);
  CountHistogram h;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    int s = 0;
    for (int j = 0; j < 40; ++j) s += r.next_double() < 0.5;
    ++h[s];
  }
  const double mu = 20.0, sigma = std::sqrt(10.0);
  const double plain = ks_to_normal(h, N, mu, sigma, false);
  const double mid = ks_to_normal(h, N, mu, sigma, true);
  // the plain statistic is dominated by the half-cell jump ~ phi(0)/sigma
  CHECK(plain > 0.04);
  CHECK(mid < 0.01);
  CHECK(mid < plain);
}
