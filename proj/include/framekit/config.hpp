#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "framekit/policy.hpp"

// Key = value run configuration. Unknown keys are rejected; all tolerances
// must be positive. '#' starts a comment.

namespace framekit {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  TruncationPolicy policy;
  int threads = 1;
  std::string out;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    try {
      if (key == "grid_points")
        cfg.policy.grid_points = std::stoi(value);
      else if (key == "k_tail_tol")
        cfg.policy.k_tail_tol = std::stod(value);
      else if (key == "n_tail_tol")
        cfg.policy.n_tail_tol = std::stod(value);
      else if (key == "quadrature_abs_tol")
        cfg.policy.quadrature_abs_tol = std::stod(value);
      else if (key == "lattice_cutoff_m")
        cfg.policy.lattice_cutoff_m = std::stoi(value);
      else if (key == "lattice_cutoff_n")
        cfg.policy.lattice_cutoff_n = std::stoi(value);
      else if (key == "refine_rel_tol")
        cfg.policy.refine_rel_tol = std::stod(value);
      else if (key == "max_grid_points")
        cfg.policy.max_grid_points = std::stoi(value);
      else if (key == "threads")
        cfg.threads = std::stoi(value);
      else if (key == "out")
        cfg.out = value;
      else
        throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ConfigError("line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    } catch (const std::out_of_range&) {
      throw ConfigError("line " + std::to_string(lineno) + ": value out of range for '" + key + "'");
    }
  }
  if (cfg.threads <= 0) throw ConfigError("threads must be positive");
  try {
    cfg.policy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

}  // namespace framekit
