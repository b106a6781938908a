#include "brx/grid_cache.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace brx {

namespace {

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string grid_cache_key(Problem problem, const Distribution& dist, int horizon,
                           const GridSpec& spec) {
  char buf[96];
  const double xmax = spec.x_max > 0.0 ? spec.x_max : dist.effective_upper();
  std::snprintf(buf, sizeof buf, "|h=%d|g=%d|x=%.17g|tol=%.17g", horizon, spec.points, xmax,
                spec.tolerance);
  return fnv1a_hex(to_string(problem) + "|" + dist.describe() + buf);
}

std::filesystem::path grid_cache_path(const std::filesystem::path& dir, const std::string& key) {
  return dir / ("grid-" + key + ".json");
}

void save_grid_cache(const std::filesystem::path& dir, const Distribution& dist,
                     const GridSpec& spec, const BellmanSolution& sol) {
  std::filesystem::create_directories(dir);
  const std::string key =
      grid_cache_key(sol.values.problem, dist, sol.values.horizon, spec);

  nlohmann::json j;
  j["schema_version"] = 1;
  j["key"] = key;
  j["problem"] = to_string(sol.values.problem);
  j["horizon"] = sol.values.horizon;
  j["points"] = static_cast<int>(sol.values.grid.size());
  j["spacing"] = sol.values.spacing();
  j["values"] = sol.values.values;
  j["alpha"] = sol.thresholds.alpha;
  j["clamped"] = sol.thresholds.clamped;
  j["warnings"] = sol.values.warnings;

  const auto path = grid_cache_path(dir, key);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write grid cache: " + path.string());
  out << j.dump();
}

std::optional<BellmanSolution> load_grid_cache(const std::filesystem::path& dir, Problem problem,
                                               const Distribution& dist, int horizon,
                                               const GridSpec& spec) {
  const std::string key = grid_cache_key(problem, dist, horizon, spec);
  const auto path = grid_cache_path(dir, key);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    nlohmann::json j;
    in >> j;
    if (j.at("key").get<std::string>() != key) return std::nullopt;
    BellmanSolution sol;
    sol.values.problem = problem;
    sol.values.horizon = j.at("horizon").get<int>();
    const int points = j.at("points").get<int>();
    const double h = j.at("spacing").get<double>();
    sol.values.grid.resize(points);
    for (int i = 0; i < points; ++i) sol.values.grid[i] = h * i;
    sol.values.values = j.at("values").get<std::vector<std::vector<double>>>();
    sol.thresholds.alpha = j.at("alpha").get<std::vector<std::vector<double>>>();
    sol.thresholds.clamped = j.at("clamped").get<std::vector<std::vector<std::uint8_t>>>();
    sol.values.warnings = j.at("warnings").get<std::vector<std::string>>();
    if (sol.values.horizon != horizon ||
        sol.values.values.size() != static_cast<std::size_t>(horizon) + 1) {
      return std::nullopt;
    }
    for (const auto& row : sol.values.values) {
      if (row.size() != static_cast<std::size_t>(points)) return std::nullopt;
    }
    return sol;
  } catch (...) {
    return std::nullopt;  // unreadable cache entries are misses
  }
}

}  // namespace brx
