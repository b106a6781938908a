#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace brx {

// Streaming central moments up to order four (Welford / Pébay update), with
// an exact merge so per-thread accumulators reduce deterministically.
struct RunningMoments {
  long long n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations
  double m3 = 0.0;
  double m4 = 0.0;

  void add(double x);
  void merge(const RunningMoments& o);

  double variance() const { return n > 1 ? m2 / (n - 1) : 0.0; }
  double std_error() const;            // of the mean
  double fourth_central() const { return n > 0 ? m4 / n : 0.0; }
  // standard error of the sample variance (uses the fourth moment)
  double variance_std_error() const;
};

using CountHistogram = std::map<int, long long>;

// Moments of an integer-valued sample stored as a histogram. Computed by
// key-ordered passes over the (few) distinct values, so the result does not
// depend on how replications were partitioned across threads.
struct HistMoments {
  long long n = 0;
  double mean = 0.0;
  double variance = 0.0;        // sample variance (n-1)
  double fourth_central = 0.0;  // central, /n
  double std_error = 0.0;
  double variance_std_error = 0.0;
};

HistMoments hist_moments(const CountHistogram& hist);

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
};

// Two-sample chi-square homogeneity test on integer histograms. Adjacent
// cells are pooled until every expected count is >= min_expected; with fewer
// than two pooled cells the test is vacuous (statistic 0, p 1).
ChiSquareResult two_sample_chi_square(const CountHistogram& a, const CountHistogram& b,
                                      double min_expected = 5.0);

// z statistics for equality of means / variances of two independent samples.
double two_sample_mean_z(const RunningMoments& a, const RunningMoments& b);
double two_sample_variance_z(const RunningMoments& a, const RunningMoments& b);
double two_sample_mean_z(const HistMoments& a, const HistMoments& b);
double two_sample_variance_z(const HistMoments& a, const HistMoments& b);

// One-sample Kolmogorov-Smirnov distance of `sorted` against a continuous
// CDF supplied as grid values cdf_at[i] = F(sorted[i]).
double ks_statistic(const std::vector<double>& cdf_at_sorted);

// KS distance of an integer-valued sample (given as a histogram) to the
// normal(mu, sigma) law. `midpoint` compares the lattice CDF at cell
// midpoints (continuity correction); otherwise it is the plain sup distance
// between the empirical step CDF and the normal CDF.
double ks_to_normal(const CountHistogram& hist, long long total, double mu, double sigma,
                    bool midpoint);

}  // namespace brx
