#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfb/model.hpp"

namespace qfb {

struct ConditionEntry;  // bounds.hpp

enum class WaveDirection { Increasing, Decreasing };

std::string to_string(WaveDirection d);

// Zero-reaction analysis: the unique candidate speed, its admissibility and
// the explicit backward profile.
struct BurgersResult {
  double speed = 0.0;  // (h(u-) - h(u+)) / (u+ - u-)
  std::optional<WaveDirection> direction;  // set when a monotone connection exists
  bool admissible = false;
  double u_minus = 0.0, u_plus = 1.0;
  // entries for acca1/acca2/accafinale/accafinale2 (ids carry those names)
  std::vector<std::pair<std::string, bool>> conditions;
  // y(w) of the monotone connection on [0, D1]; empty when not admissible
  std::function<double(double)> profile_closed_form;
};

// Speed and admissibility of a monotone {u-, u+}-connection for the
// zero-reaction equation. For the {0,1} pair the conditions are
//   increasing:  h(u) - 1 < h(1) u < h(u)      on (0,1)
//   decreasing:  h(u) < h(1) u < h(u) + 1      on (0,1)
// checked strictly (margin 1e-10) on a 2001-point interior grid; general
// pairs use the same chain transported to (min(u-,u+), max(u-,u+)).
BurgersResult burgers_speed(const ProblemSpec& spec, double u_minus, double u_plus);

// Closed-form backward profile
//   y(w) = 1 - sqrt(1 - (c D^{-1}(w) - c + h(D^{-1}(w)) - h(1))^2)
// valid under acca1 (c - c u + h(1) - h(u) < 0) and acca2 (argument < 1),
// both checked on the grid; throws with the first violating u otherwise.
std::function<double(double)> burgers_profile(const ProblemSpec& spec, double c);

}  // namespace qfb
