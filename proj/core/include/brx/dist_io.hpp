#pragma once

#include <filesystem>

#include "brx/distribution.hpp"

namespace brx {

// A set of marginals plus the coupling they are drawn under.
struct DistSpec {
  std::vector<Distribution> marginals;
  Coupling coupling = Coupling::independent;
};

// Loads a marginal description file. JSON shape:
//   {"marginals": [{"kind":"uniform","b":1.0},
//                  {"kind":"beta_order","i":3,"n":10},
//                  {"kind":"tabulated","csv":"cdf.csv"}],
//    "coupling": "independent"}
// A tabulated entry may also inline "knots"/"cdf" arrays; a relative "csv"
// path resolves against the JSON file's directory. A bare .csv path loads a
// single tabulated marginal. Malformed input throws std::invalid_argument
// naming the offending field.
DistSpec load_dist_spec(const std::filesystem::path& file);

// Two-column CSV (x, F(x)), optional header line.
Distribution load_tabulated_csv(const std::filesystem::path& file);

}  // namespace brx
