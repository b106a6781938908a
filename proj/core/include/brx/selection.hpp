#pragma once

#include <span>
#include <vector>

namespace brx {

// Greedy solution of max{|A| : sum_{i in A} x_i <= budget}: take items in
// increasing (value, index) order while the running total fits. The
// value-then-index order makes the selected set unique even with ties.
struct SelectionResult {
  int count = 0;
  std::vector<int> indices;  // 0-based, in acceptance order
  double total = 0.0;
};

SelectionResult maximal_function(std::span<const double> sample, double budget);

// Count only (no index bookkeeping); same selection rule.
int maximal_count(std::span<const double> sample, double budget);

// Exhaustive subset-enumeration oracle, n <= 20.
int brute_force_maximal(std::span<const double> sample, double budget);

// Size and total of {i : x_i <= threshold}.
struct BelowThresholdCount {
  int count = 0;
  double total = 0.0;
};

BelowThresholdCount count_below_threshold(std::span<const double> sample, double threshold);

}  // namespace brx
