#include "brx/dist_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace brx {

namespace {

using nlohmann::json;

Distribution marginal_from_json(const json& m, const std::filesystem::path& base_dir) {
  if (!m.is_object() || !m.contains("kind") || !m["kind"].is_string()) {
    throw std::invalid_argument("marginals[]: each entry needs a string field 'kind'");
  }
  const std::string kind = m["kind"].get<std::string>();
  if (kind == "uniform") {
    if (!m.contains("b") || !m["b"].is_number()) {
      throw std::invalid_argument("marginals[].b: uniform needs a numeric upper end 'b'");
    }
    return Distribution::uniform_scaled(m["b"].get<double>());
  }
  if (kind == "beta_order") {
    if (!m.contains("i") || !m.contains("n") || !m["i"].is_number_integer() ||
        !m["n"].is_number_integer()) {
      throw std::invalid_argument("marginals[].i/n: beta_order needs integer fields 'i' and 'n'");
    }
    return Distribution::beta_order_stat(m["i"].get<int>(), m["n"].get<int>());
  }
  if (kind == "tabulated") {
    if (m.contains("csv")) {
      if (!m["csv"].is_string()) {
        throw std::invalid_argument("marginals[].csv: must be a path string");
      }
      std::filesystem::path p = m["csv"].get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      return load_tabulated_csv(p);
    }
    if (m.contains("knots") && m.contains("cdf")) {
      if (!m["knots"].is_array() || !m["cdf"].is_array()) {
        throw std::invalid_argument("marginals[].knots/cdf: must be numeric arrays");
      }
      return Distribution::tabulated(m["knots"].get<std::vector<double>>(),
                                     m["cdf"].get<std::vector<double>>());
    }
    throw std::invalid_argument("marginals[]: tabulated needs 'csv' or 'knots'+'cdf'");
  }
  throw std::invalid_argument("marginals[].kind: expected uniform|beta_order|tabulated, got '" +
                              kind + "'");
}

}  // namespace

DistSpec load_dist_spec(const std::filesystem::path& file) {
  if (file.extension() == ".csv") {
    DistSpec spec;
    spec.marginals.push_back(load_tabulated_csv(file));
    return spec;
  }
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open marginal file: " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("marginal file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object() || !j.contains("marginals") || !j["marginals"].is_array() ||
      j["marginals"].empty()) {
    throw std::invalid_argument("marginals: need a non-empty array of marginal objects");
  }
  DistSpec spec;
  const auto base_dir = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
  for (const auto& m : j["marginals"]) {
    spec.marginals.push_back(marginal_from_json(m, base_dir));
  }
  if (j.contains("coupling")) {
    if (!j["coupling"].is_string()) {
      throw std::invalid_argument("coupling: must be a string");
    }
    spec.coupling = coupling_from_string(j["coupling"].get<std::string>());
  }
  return spec;
}

Distribution load_tabulated_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open CSV file: " + file.string());
  std::vector<double> knots, cdf;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // tolerate blank lines and an optional header
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, f;
    if (!(ls >> x >> f)) {
      if (lineno == 1) continue;  // header
      throw std::invalid_argument("csv line " + std::to_string(lineno) +
                                  ": expected two numeric columns (x, F)");
    }
    knots.push_back(x);
    cdf.push_back(f);
  }
  return Distribution::tabulated(std::move(knots), std::move(cdf));
}

}  // namespace brx
