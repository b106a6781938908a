#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace brx {

// Reference constants, kept at the precision they are quoted at; comparisons
// against them use tolerances no tighter than that precision.
inline constexpr double kEulerGammaPrinted = 0.5772;
inline constexpr double kLisCorrectionCoeff = 1.77108;

// H_n by direct summation.
double harmonic_number(int n);

// E[min(n, floor(1/X))], X ~ uniform(0,1), by exact piecewise integration of
// the staircase; telescopes to H_n. Independent route to harmonic_number.
double capped_reciprocal_mean_exact(int n);

// integral of frac(1/x) over [eps, 1], piecewise exact; -> 1 - gamma.
double fractional_reciprocal_integral(double eps);

// Longest strictly increasing subsequence, O(n log n) patience method.
int lis_length(std::span<const double> seq);

struct StudyReport {
  std::string study;
  int n = 0;
  long long reps = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
  bool pass = true;
};

// Heterogeneous scaled uniforms on [0,i], budget 1: threshold and bound in
// closed form via H_n, Monte Carlo under independent and comonotone
// couplings stays under the bound.
StudyReport study_scaled_uniform_bound(int n, long long reps, std::uint64_t seed);

// n iid uniform(0,1) marginals made comonotone: the selected count is
// min(n, floor(1/U)) with exact mean H_n, far below the independence bound
// sqrt(2n). Also evaluates the fractional-part integral that produces the
// Euler constant.
StudyReport study_capped_reciprocal(int n, long long reps, std::uint64_t seed);

// Order-statistic marginals Beta(i, n-i+1) under the sorted-uniform
// coupling: same threshold and bound as n iid uniforms, Monte Carlo mean
// close to (and below) the bound.
StudyReport study_order_statistics(int n, long long reps, std::uint64_t seed);

// Mean length of the longest increasing subsequence vs the second-order
// prediction 2 sqrt(n) - c n^{1/6}, plus the online monotone-selection value
// as a lower envelope (computed for n <= 500).
StudyReport study_lis_asymptotics(int n, long long reps, std::uint64_t seed);

// case-id dispatch for the CLI: scaled_uniform_bound | capped_reciprocal |
// order_statistics | lis_asymptotics
StudyReport run_study(const std::string& case_id, int n, long long reps, std::uint64_t seed);

}  // namespace brx
