#include "brx/selection.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace brx {

SelectionResult maximal_function(std::span<const double> sample, double budget) {
  std::vector<int> order(sample.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (sample[a] != sample[b]) return sample[a] < sample[b];
    return a < b;
  });
  SelectionResult r;
  for (int idx : order) {
    if (r.total + sample[idx] > budget) break;
    r.total += sample[idx];
    r.indices.push_back(idx);
  }
  r.count = static_cast<int>(r.indices.size());
  return r;
}

int maximal_count(std::span<const double> sample, double budget) {
  std::vector<double> v(sample.begin(), sample.end());
  std::sort(v.begin(), v.end());
  int count = 0;
  double total = 0.0;
  for (double x : v) {
    if (total + x > budget) break;
    total += x;
    ++count;
  }
  return count;
}

int brute_force_maximal(std::span<const double> sample, double budget) {
  const int n = static_cast<int>(sample.size());
  if (n > 20) throw std::invalid_argument("brute_force_maximal: n must be <= 20");
  int best = 0;
  const std::uint32_t lim = 1u << n;
  for (std::uint32_t mask = 0; mask < lim; ++mask) {
    double sum = 0.0;
    int size = 0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        sum += sample[i];
        ++size;
      }
    }
    if (sum <= budget && size > best) best = size;
  }
  return best;
}

BelowThresholdCount count_below_threshold(std::span<const double> sample, double threshold) {
  BelowThresholdCount r;
  for (double x : sample) {
    if (x <= threshold) {
      ++r.count;
      r.total += x;
    }
  }
  return r;
}

}  // namespace brx
