#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfb/integrate.hpp"
#include "qfb/model.hpp"

namespace qfb {

enum class SpeedKind { HalfLine, Unique, NotFound };

struct SolverOptions {
  double tol_c = 1e-4;      // bracket width at which the speed is reported
  double tol_match = 1e-6;  // |mismatch| / terminal value declaring a connection
  IntegrateOptions integ;
  std::optional<std::pair<double, double>> bracket_override;
};

// One probe of the matching functional at a candidate c.
struct ProbeRecord {
  double c = 0.0;
  double mismatch = std::numeric_limits<double>::quiet_NaN();  // +-inf conventions applied
  int sign = 0;            // -1 / +1 bracketing direction, 0 = excluded
  bool defined = false;    // both trajectories reached w0 with finite values
  bool trivial_forward = false;
  TerminationKind forward = TerminationKind::ReachedEnd;
  TerminationKind backward = TerminationKind::ReachedEnd;
};

struct SpeedResult {
  SpeedKind kind = SpeedKind::NotFound;
  double c_star = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  std::pair<double, double> bracket_used{0.0, 0.0};
  std::string reason;  // NotFound: no-sign-change | no-match | non-monotone | undefined-probes
  std::vector<ProbeRecord> probes;
  bool both_blow_up = false;  // probes show forward blow-up on one side, backward on the other
  std::optional<Termination> backward_evidence;  // full-range backward run at a reference c
  double evidence_c = 0.0;

  bool found() const { return kind != SpeedKind::NotFound; }
};

// Class A: the connection closes iff the (unique) backward solution reaches
// the left equilibrium. Decided on the backward trajectory alone.
bool admissible_A(const ReducedProblem& rp, double c, const SolverOptions& opts = {});

// Class A: HalfLine{c*} by bisection of admissible_A over the analytic
// bracket [lower_bound_A, upper_bound_A], right endpoint widened by +1 once
// if it unexpectedly fails.
SpeedResult critical_speed_A(const ReducedProblem& rp, const SolverOptions& opts = {});

// Class B/C (and Zero, matched at D(1/2)): M(c) = y+_c(w0) - y-_c(w0) with
// the blow-up conventions; increasing in c where defined.
ProbeRecord mismatch_BC(const ReducedProblem& rp, double c, const SolverOptions& opts = {});

// Class B/C: bisection of the mismatch over the stimaconfisher bracket.
SpeedResult unique_speed_BC(const ReducedProblem& rp, const SolverOptions& opts = {});

// Dispatch on the reaction class (Zero goes through the explicit
// zero-reaction analysis).
SpeedResult find_speed(const ReducedProblem& rp, const SolverOptions& opts = {});

}  // namespace qfb
