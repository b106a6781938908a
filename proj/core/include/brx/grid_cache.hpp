#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "brx/bellman.hpp"

namespace brx {

// Cache key: content hash of the problem, the marginal law, the horizon and
// the grid layout. Anything that changes the solved values changes the key.
std::string grid_cache_key(Problem problem, const Distribution& dist, int horizon,
                           const GridSpec& spec);

std::filesystem::path grid_cache_path(const std::filesystem::path& dir, const std::string& key);

void save_grid_cache(const std::filesystem::path& dir, const Distribution& dist,
                     const GridSpec& spec, const BellmanSolution& sol);

// Miss (absent, unreadable, or keyed differently) loads as nullopt; the
// caller re-solves and overwrites.
std::optional<BellmanSolution> load_grid_cache(const std::filesystem::path& dir, Problem problem,
                                               const Distribution& dist, int horizon,
                                               const GridSpec& spec);

}  // namespace brx
