#include "qfb/burgers.hpp"

#include <cmath>

namespace qfb {

namespace {

constexpr int kGrid = 2001;
constexpr double kMargin = 1e-10;  // strictness margin for the open-interval inequalities

// psi(u) = c (u - b) + h(u) - h(b) for the interval (a, b); the increasing
// connection needs 0 < psi < 1 on (a, b), the decreasing one 0 < -psi < 1.
double psi_on(const ProblemSpec& spec, double c, double b, double u) {
  return c * (u - b) + spec.h_val(u) - spec.h_val(b);
}

bool strict_on_grid(const ProblemSpec& spec, double c, double a, double b,
                    bool increasing, double* first_violation) {
  for (int i = 1; i < kGrid - 1; ++i) {
    const double u = a + (b - a) * i / (kGrid - 1);
    const double psi = psi_on(spec, c, b, u);
    const double v = increasing ? psi : -psi;
    if (!(v > kMargin && v < 1.0 - kMargin)) {
      if (first_violation) *first_violation = u;
      return false;
    }
  }
  return true;
}

}  // namespace

std::string to_string(WaveDirection d) {
  return d == WaveDirection::Increasing ? "increasing" : "decreasing";
}

BurgersResult burgers_speed(const ProblemSpec& spec, double u_minus, double u_plus) {
  if (spec.cls != ReactionClass::Zero)
    throw std::invalid_argument("burgers_speed: reaction must be identically zero");
  if (u_minus == u_plus) throw std::invalid_argument("burgers_speed: u- and u+ coincide");
  if (u_minus < 0.0 || u_minus > 1.0 || u_plus < 0.0 || u_plus > 1.0)
    throw std::invalid_argument("burgers_speed: states must lie in [0,1]");

  BurgersResult res;
  res.u_minus = u_minus;
  res.u_plus = u_plus;
  res.speed = (spec.h_val(u_minus) - spec.h_val(u_plus)) / (u_plus - u_minus);

  const double a = std::min(u_minus, u_plus);
  const double b = std::max(u_minus, u_plus);
  const bool inc_ok = strict_on_grid(spec, res.speed, a, b, true, nullptr);
  const bool dec_ok = strict_on_grid(spec, res.speed, a, b, false, nullptr);
  const bool std_pair = a == 0.0 && b == 1.0;
  res.conditions.emplace_back(std_pair ? "accafinale" : "accafinale_pair", inc_ok);
  res.conditions.emplace_back(std_pair ? "accafinale2" : "accafinale2_pair", dec_ok);

  if (inc_ok) {
    res.direction = WaveDirection::Increasing;
  } else if (dec_ok) {
    res.direction = WaveDirection::Decreasing;
  }
  res.admissible = res.direction.has_value();
  if (res.admissible) {
    const ProblemSpec* sp = &spec;
    const double c = res.speed;
    const bool increasing = *res.direction == WaveDirection::Increasing;
    const double eps_sq = spec.epsilon * spec.epsilon;
    res.profile_closed_form = [sp, c, b, increasing, eps_sq](double w) {
      // w -> u through D; D is strictly increasing so a local bisection is enough
      double lo = 0.0, hi = 1.0;
      for (int i = 0; i < 64; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sp->D.eval(mid) >= w ? hi : lo) = mid;
      }
      const double u = 0.5 * (lo + hi);
      double psi = psi_on(*sp, c, b, u) / eps_sq;
      if (!increasing) psi = -psi;
      psi = std::clamp(psi, 0.0, 1.0);
      return 1.0 - std::sqrt(std::max(0.0, 1.0 - psi * psi));
    };
  }
  return res;
}

std::function<double(double)> burgers_profile(const ProblemSpec& spec, double c) {
  if (spec.cls != ReactionClass::Zero)
    throw std::invalid_argument("burgers_profile: reaction must be identically zero");
  // acca1: c - c u + h(1) - h(u) < 0;  acca2: c u - c + h(u) - h(1) < 1
  for (int i = 1; i < kGrid - 1; ++i) {
    const double u = static_cast<double>(i) / (kGrid - 1);
    const double psi = psi_on(spec, c, 1.0, u);
    if (!(psi > kMargin)) {
      throw std::domain_error("burgers_profile: acca1 fails at u=" + std::to_string(u));
    }
    if (!(psi < 1.0 - kMargin)) {
      throw std::domain_error("burgers_profile: acca2 fails at u=" + std::to_string(u));
    }
  }
  const ProblemSpec* sp = &spec;
  const double eps_sq = spec.epsilon * spec.epsilon;
  return [sp, c, eps_sq](double w) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 64; ++i) {
      const double mid = 0.5 * (lo + hi);
      (sp->D.eval(mid) >= w ? hi : lo) = mid;
    }
    const double u = 0.5 * (lo + hi);
    const double psi = std::clamp(psi_on(*sp, c, 1.0, u) / eps_sq, 0.0, 1.0);
    return 1.0 - std::sqrt(std::max(0.0, 1.0 - psi * psi));
  };
}

}  // namespace qfb
