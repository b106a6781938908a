#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "brx/bellman.hpp"
#include "brx/distribution.hpp"
#include "brx/rng.hpp"
#include "brx/stats.hpp"

namespace brx {

struct PolicyStep {
  int index = 0;  // 1-based observation number
  double observation = 0.0;
  double state_before = 0.0;
  double accept_lo = 0.0;  // acceptance interval for this step
  double accept_hi = 0.0;
  bool accepted = false;
  double state_after = 0.0;
};

struct PolicyTrace {
  Problem problem = Problem::knapsack;
  int final_count = 0;
  std::vector<PolicyStep> steps;
};

// Roll the threshold policy forward over `horizon` iid draws from `dist`,
// starting from capacity/window edge x0. The solution must cover at least
// `horizon` stages.
PolicyTrace simulate_policy(const BellmanSolution& sol, const Distribution& dist, int horizon,
                            double x0, Rng& rng);

// Count-only rollout. When `checkpoints` (ascending 1-based step numbers)
// is non-empty, counts_out[i] receives the running count right after step
// checkpoints[i].
int simulate_count(const BellmanSolution& sol, const Distribution& dist, int horizon, double x0,
                   Rng& rng, std::span<const int> checkpoints = {}, int* counts_out = nullptr);

struct SimulationSummary {
  Problem problem = Problem::knapsack;
  int horizon = 0;
  long long reps = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
  CountHistogram histogram;
};

// Map-reduce over replications. Replication r always uses the stream
// split(r) of the seed, so results are identical for every thread count.
// All summary statistics derive from the merged integer histogram.
SimulationSummary run_replications(const BellmanSolution& sol, const Distribution& dist,
                                   int horizon, double x0, long long reps, std::uint64_t seed,
                                   int threads, std::vector<int>* final_counts = nullptr);

// -------- distributional identity of the two chains (uniform marginals) ---

struct IdentityCell {
  int k = 0;
  double mean_knapsack = 0.0, mean_monotone = 0.0;
  double mean_z = 0.0, mean_p = 1.0;
  double var_z = 0.0, var_p = 1.0;
  double chi_stat = 0.0, chi_p = 1.0;
  int chi_df = 0;
  bool pass = true;
};

struct IdentityReport {
  int horizon = 0;
  long long reps = 0;
  std::uint64_t seed = 0;
  bool shared_stream = false;
  double family_level = 0.01;
  double per_test_level = 0.0;  // Bonferroni: family / (3 * #checkpoints)
  std::vector<IdentityCell> cells;
  // consecutive-checkpoint covariances, reported as data (no gate)
  std::vector<double> cov_knapsack, cov_monotone;
  // L_inf distance of the first-step state histograms (20 bins), data only
  double first_step_divergence = 0.0;
  bool all_pass = true;
};

// Compares the prefix selection counts of the two chains at the given
// checkpoints, over `reps` paired runs with uniform(0,1) marginals.
IdentityReport distributional_identity_test(int horizon, std::vector<int> checkpoints,
                                            long long reps, std::uint64_t seed,
                                            bool shared_stream, int threads,
                                            const GridSpec& spec = {});

// -------- fluctuation scaling of the monotone chain ------------------------

struct CltEntry {
  int n = 0;
  long long reps = 0;
  double dp_value = 0.0;    // optimal expected count from the DP
  double mc_mean = 0.0, mc_se = 0.0;
  double variance = 0.0;
  double sqrt_2n = 0.0;
  double var_ratio = 0.0;   // variance / ((1/3) sqrt(2n))
  double ks_centered = 0.0;   // plain KS of (V - sqrt(2n)) * sqrt(3)/(2n)^{1/4} vs N(0,1)
  double ks_normality = 0.0;  // lattice-midpoint KS, centered at the DP value
  bool mean_below_ref = true;  // mc_mean <= sqrt(2n)
};

struct CltReport {
  long long reps = 0;
  std::uint64_t seed = 0;
  std::vector<CltEntry> entries;  // in the order of `ns` (ascending expected)
  bool ratio_trend_ok = true;     // |var_ratio - 1| nonincreasing
};

CltReport clt_variance_check(std::vector<int> ns, long long reps, std::uint64_t seed,
                             int threads, const GridSpec& spec = {});

}  // namespace brx
