#include "brx/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "brx/special.hpp"

namespace brx {

namespace {

void check_rollout_args(const BellmanSolution& sol, int horizon, double x0) {
  if (horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
  if (horizon > sol.values.horizon) {
    throw std::invalid_argument("simulate: solution covers fewer stages than the horizon");
  }
  if (!(x0 >= 0.0) || x0 > sol.values.upper() * (1.0 + 1e-12)) {
    throw std::invalid_argument("simulate: x0 outside the solved state range");
  }
}

}  // namespace

PolicyTrace simulate_policy(const BellmanSolution& sol, const Distribution& dist, int horizon,
                            double x0, Rng& rng) {
  check_rollout_args(sol, horizon, x0);
  PolicyTrace trace;
  trace.problem = sol.values.problem;
  trace.steps.reserve(static_cast<std::size_t>(horizon));
  double state = std::min(x0, sol.values.upper());
  for (int k = horizon; k >= 1; --k) {
    PolicyStep st;
    st.index = horizon - k + 1;
    st.state_before = state;
    st.observation = dist.quantile(rng.next_double());
    const double alpha = sol.alpha_at(k, state);
    if (trace.problem == Problem::knapsack) {
      st.accept_lo = 0.0;
      st.accept_hi = alpha;
      st.accepted = st.observation <= alpha;
      if (st.accepted) state -= st.observation;
    } else {
      st.accept_lo = state - alpha;
      st.accept_hi = state;
      st.accepted = st.observation >= st.accept_lo && st.observation <= state;
      if (st.accepted) state = st.observation;
    }
    if (st.accepted) ++trace.final_count;
    st.state_after = state;
    trace.steps.push_back(st);
  }
  return trace;
}

int simulate_count(const BellmanSolution& sol, const Distribution& dist, int horizon, double x0,
                   Rng& rng, std::span<const int> checkpoints, int* counts_out) {
  check_rollout_args(sol, horizon, x0);
  const bool knapsack = sol.values.problem == Problem::knapsack;
  double state = std::min(x0, sol.values.upper());
  int count = 0;
  std::size_t next_cp = 0;
  for (int k = horizon; k >= 1; --k) {
    const double x = dist.quantile(rng.next_double());
    const double alpha = sol.alpha_at(k, state);
    if (knapsack) {
      if (x <= alpha) {
        state -= x;
        ++count;
      }
    } else {
      if (x >= state - alpha && x <= state) {
        state = x;
        ++count;
      }
    }
    const int step = horizon - k + 1;
    while (next_cp < checkpoints.size() && checkpoints[next_cp] == step) {
      counts_out[next_cp] = count;
      ++next_cp;
    }
  }
  return count;
}

SimulationSummary run_replications(const BellmanSolution& sol, const Distribution& dist,
                                   int horizon, double x0, long long reps, std::uint64_t seed,
                                   int threads, std::vector<int>* final_counts) {
  check_rollout_args(sol, horizon, x0);
  if (reps < 1) throw std::invalid_argument("simulate: reps must be >= 1");
  const int nthreads = static_cast<int>(std::max<long long>(1, std::min<long long>(threads, reps)));
  if (final_counts) final_counts->assign(static_cast<std::size_t>(reps), 0);

  const Rng base(seed);
  std::vector<CountHistogram> hists(nthreads);
  auto worker = [&](int t) {
    const long long chunk = (reps + nthreads - 1) / nthreads;
    const long long lo = t * chunk;
    const long long hi = std::min(reps, lo + chunk);
    auto& hist = hists[t];
    for (long long r = lo; r < hi; ++r) {
      Rng rng = base.split(static_cast<std::uint64_t>(r));
      const int c = simulate_count(sol, dist, horizon, x0, rng);
      ++hist[c];
      if (final_counts) (*final_counts)[static_cast<std::size_t>(r)] = c;
    }
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  SimulationSummary sum;
  sum.problem = sol.values.problem;
  sum.horizon = horizon;
  sum.reps = reps;
  for (auto& h : hists) {
    for (const auto& [k, c] : h) sum.histogram[k] += c;
  }
  const HistMoments m = hist_moments(sum.histogram);
  sum.mean = m.mean;
  sum.variance = m.variance;
  sum.std_error = m.std_error;
  return sum;
}

IdentityReport distributional_identity_test(int horizon, std::vector<int> checkpoints,
                                            long long reps, std::uint64_t seed,
                                            bool shared_stream, int threads,
                                            const GridSpec& spec) {
  if (reps < 2) throw std::invalid_argument("identity: reps must be >= 2");
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
  if (checkpoints.empty() || checkpoints.front() < 1 || checkpoints.back() > horizon) {
    throw std::invalid_argument("identity: checkpoints must lie in [1, horizon]");
  }
  const std::size_t K = checkpoints.size();

  const auto dist = Distribution::uniform_scaled(1.0);
  const auto sol_k = solve_knapsack_values(dist, horizon, spec);
  const auto sol_m = solve_monotone_values(dist, horizon, spec);
  const double x0 = sol_k.values.upper();

  constexpr int kStateBins = 20;

  struct Local {
    std::vector<CountHistogram> hist_k, hist_m;
    // integer sums for consecutive-checkpoint covariances, exact in double
    std::vector<double> sum_pair_k, sum_pair_m;
    std::vector<long long> state_bins_k, state_bins_m;
  };

  const int nthreads = static_cast<int>(std::max<long long>(1, std::min<long long>(threads, reps)));
  std::vector<Local> locals(nthreads);
  const Rng base(seed);

  auto worker = [&](int t) {
    Local& L = locals[t];
    L.hist_k.resize(K);
    L.hist_m.resize(K);
    L.sum_pair_k.assign(K > 1 ? K - 1 : 0, 0.0);
    L.sum_pair_m.assign(K > 1 ? K - 1 : 0, 0.0);
    L.state_bins_k.assign(kStateBins, 0);
    L.state_bins_m.assign(kStateBins, 0);
    std::vector<int> counts_k(K), counts_m(K);
    const long long chunk = (reps + nthreads - 1) / nthreads;
    const long long lo = t * chunk;
    const long long hi = std::min(reps, lo + chunk);
    for (long long r = lo; r < hi; ++r) {
      const std::uint64_t rr = static_cast<std::uint64_t>(r);
      Rng rng_k = shared_stream ? base.split(rr) : base.split(2 * rr);
      Rng rng_m = shared_stream ? base.split(rr) : base.split(2 * rr + 1);

      // peek at the first observation to bin the post-step state
      {
        Rng peek_k = rng_k;
        const double x1 = dist.quantile(peek_k.next_double());
        const double a1 = sol_k.alpha_at(horizon, x0);
        const double s1 = x1 <= a1 ? x0 - x1 : x0;
        ++L.state_bins_k[std::min(kStateBins - 1, static_cast<int>(s1 / x0 * kStateBins))];
        Rng peek_m = rng_m;
        const double y1 = dist.quantile(peek_m.next_double());
        const double b1 = sol_m.alpha_at(horizon, x0);
        const double s2 = (y1 >= x0 - b1 && y1 <= x0) ? y1 : x0;
        ++L.state_bins_m[std::min(kStateBins - 1, static_cast<int>(s2 / x0 * kStateBins))];
      }

      simulate_count(sol_k, dist, horizon, x0, rng_k, checkpoints, counts_k.data());
      simulate_count(sol_m, dist, horizon, x0, rng_m, checkpoints, counts_m.data());
      for (std::size_t i = 0; i < K; ++i) {
        ++L.hist_k[i][counts_k[i]];
        ++L.hist_m[i][counts_m[i]];
        if (i + 1 < K) {
          L.sum_pair_k[i] += static_cast<double>(counts_k[i]) * counts_k[i + 1];
          L.sum_pair_m[i] += static_cast<double>(counts_m[i]) * counts_m[i + 1];
        }
      }
    }
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  // ordered merge
  std::vector<CountHistogram> hist_k(K), hist_m(K);
  std::vector<double> pair_k(K > 1 ? K - 1 : 0, 0.0), pair_m(K > 1 ? K - 1 : 0, 0.0);
  std::vector<long long> bins_k(kStateBins, 0), bins_m(kStateBins, 0);
  for (const auto& L : locals) {
    for (std::size_t i = 0; i < K; ++i) {
      for (const auto& [k, c] : L.hist_k[i]) hist_k[i][k] += c;
      for (const auto& [k, c] : L.hist_m[i]) hist_m[i][k] += c;
    }
    for (std::size_t i = 0; i + 1 < K; ++i) {
      pair_k[i] += L.sum_pair_k[i];
      pair_m[i] += L.sum_pair_m[i];
    }
    for (int b = 0; b < kStateBins; ++b) {
      bins_k[b] += L.state_bins_k[b];
      bins_m[b] += L.state_bins_m[b];
    }
  }

  IdentityReport rep;
  rep.horizon = horizon;
  rep.reps = reps;
  rep.seed = seed;
  rep.shared_stream = shared_stream;
  rep.per_test_level = rep.family_level / (3.0 * static_cast<double>(K));

  std::vector<HistMoments> mom_k(K), mom_m(K);
  for (std::size_t i = 0; i < K; ++i) {
    mom_k[i] = hist_moments(hist_k[i]);
    mom_m[i] = hist_moments(hist_m[i]);

    IdentityCell cell;
    cell.k = checkpoints[i];
    cell.mean_knapsack = mom_k[i].mean;
    cell.mean_monotone = mom_m[i].mean;
    cell.mean_z = two_sample_mean_z(mom_k[i], mom_m[i]);
    cell.mean_p = 2.0 * normal_sf(std::fabs(cell.mean_z));
    cell.var_z = two_sample_variance_z(mom_k[i], mom_m[i]);
    cell.var_p = 2.0 * normal_sf(std::fabs(cell.var_z));
    const ChiSquareResult chi = two_sample_chi_square(hist_k[i], hist_m[i]);
    cell.chi_stat = chi.statistic;
    cell.chi_df = chi.df;
    cell.chi_p = chi.p_value;
    cell.pass = cell.mean_p >= rep.per_test_level && cell.var_p >= rep.per_test_level &&
                cell.chi_p >= rep.per_test_level;
    rep.all_pass = rep.all_pass && cell.pass;
    rep.cells.push_back(cell);
  }

  const double nn = static_cast<double>(reps);
  for (std::size_t i = 0; i + 1 < K; ++i) {
    rep.cov_knapsack.push_back(pair_k[i] / nn - mom_k[i].mean * mom_k[i + 1].mean);
    rep.cov_monotone.push_back(pair_m[i] / nn - mom_m[i].mean * mom_m[i + 1].mean);
  }
  for (int b = 0; b < kStateBins; ++b) {
    rep.first_step_divergence = std::max(
        rep.first_step_divergence, std::fabs(bins_k[b] - bins_m[b]) / nn);
  }
  return rep;
}

CltReport clt_variance_check(std::vector<int> ns, long long reps, std::uint64_t seed,
                             int threads, const GridSpec& spec) {
  if (ns.empty()) throw std::invalid_argument("clt: need at least one horizon");
  if (reps < 2) throw std::invalid_argument("clt: reps must be >= 2");
  std::sort(ns.begin(), ns.end());
  const int nmax = ns.back();
  if (ns.front() < 1) throw std::invalid_argument("clt: horizons must be >= 1");

  const auto dist = Distribution::uniform_scaled(1.0);
  const auto sol = solve_monotone_values(dist, nmax, spec);
  const double x0 = sol.values.upper();

  CltReport report;
  report.reps = reps;
  report.seed = seed;
  const Rng base(seed);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const int n = ns[i];
    // distinct deterministic stream family per horizon
    const Rng nbase = base.split(0x10000000ull + static_cast<std::uint64_t>(n));
    const auto sum = run_replications(sol, dist, n, x0, reps, nbase.key(), threads);

    CltEntry e;
    e.n = n;
    e.reps = reps;
    e.dp_value = sol.values.values[n].back();
    e.mc_mean = sum.mean;
    e.mc_se = sum.std_error;
    e.variance = sum.variance;
    e.sqrt_2n = std::sqrt(2.0 * n);
    e.var_ratio = sum.variance / (std::sqrt(2.0 * n) / 3.0);
    const double sigma = std::pow(2.0 * n, 0.25) / std::sqrt(3.0);
    e.ks_centered = ks_to_normal(sum.histogram, reps, e.sqrt_2n, sigma, /*midpoint=*/false);
    e.ks_normality = ks_to_normal(sum.histogram, reps, e.dp_value, sigma, /*midpoint=*/true);
    e.mean_below_ref = e.mc_mean <= e.sqrt_2n;
    report.entries.push_back(e);
  }
  for (std::size_t i = 0; i + 1 < report.entries.size(); ++i) {
    const double a = std::fabs(report.entries[i].var_ratio - 1.0);
    const double b = std::fabs(report.entries[i + 1].var_ratio - 1.0);
    if (b > a) report.ratio_trend_ok = false;
  }
  return report;
}

}  // namespace brx
