#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "qfb/model.hpp"
#include "qfb/speed.hpp"

namespace qfb {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat JSON problem description:
// {
//   "f": "u*(1-u)", "h": "0.05*u^2", "D": "u", "epsilon": 1.0,
//   "class_override": "A",
//   "solver": {"step": 2.5e-4, "tol_c": 1e-4, "tol_match": 1e-6, "method": "rk4"},
//   "bracket_override": [lo, hi],
//   "eta": 0.015, "kappa": 0.1, "zeta": 0.05,
//   "output": {"format": "json", "path": "out.json"}
// }
// Only "f" is required.
struct Config {
  std::string f;
  std::string h = "0";
  std::string D = "u";
  double epsilon = 1.0;
  std::optional<ReactionClass> class_override;
  SolverOptions solver;
  std::optional<double> eta, kappa, zeta;
  std::string output_format = "json";  // csv | json
  std::string output_path;

  static Config load(const std::string& path);
  static Config from_json_text(const std::string& text, const std::string& origin = "<inline>");

  // Validates the hypotheses; throws HypothesisError naming the failing one.
  ProblemSpec to_problem_spec() const;
};

// Deterministic JSON rendering of a speed search (stable key order).
std::string speed_result_json(const SpeedResult& result);

}  // namespace qfb
