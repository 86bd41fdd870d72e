#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfb/model.hpp"

namespace qfb {

// The RHS evaluation produced a non-finite value or the step controller
// underflowed away from the singularity.
class IntegrationFault : public std::runtime_error {
public:
  IntegrationFault(const std::string& what, double w)
      : std::runtime_error(what + " at w=" + std::to_string(w)), w_(w) {}
  double w() const { return w_; }

private:
  double w_ = 0.0;
};

enum class TerminationKind {
  ReachedEnd,  // integrated through to w_stop
  HitOne,      // y reached 1 - tol_blowup (profile slope blows up)
  HitZero,     // y reached 0 at an interior w
  Trivial,     // the solution is identically zero
};

struct Termination {
  TerminationKind kind = TerminationKind::ReachedEnd;
  double w = 0.0;               // event location for HitOne / HitZero
  bool step_underflow = false;  // HitOne declared because the step controller underflowed
};

std::string to_string(const Termination& t);

enum class Direction { Forward, Backward };
enum class IntegrationMethod { RK4, Euler };
enum class Chart { SqrtY, RawY };

struct IntegrateOptions {
  double step = 2.5e-4;          // base grid spacing in w
  IntegrationMethod method = IntegrationMethod::RK4;
  Chart chart = Chart::SqrtY;    // sigma = sqrt(y) removes the sqrt degeneracy at y=0
  double tol_blowup = 1e-9;      // distance from y=1 declaring HitOne
  double delta_scale = 1e-6;     // startup offset delta = delta_scale * D1
};

struct Trajectory {
  std::vector<std::pair<double, double>> samples;  // (w, y), strictly monotone in w
  Termination status;
  double c = 0.0;
  Direction direction = Direction::Forward;
  std::string note;

  double terminal_w() const { return samples.empty() ? 0.0 : samples.back().first; }
  double terminal_y() const { return samples.empty() ? 0.0 : samples.back().second; }
  bool reached_end() const { return status.kind == TerminationKind::ReachedEnd; }
};

using RhsFn = std::function<double(double, double)>;

// Fixed-base-grid integrator with adaptive substepping near the square-root
// degeneracy at y=0 and the R singularity at y=1. Samples are recorded at the
// base nodes. w_to < w_from integrates leftward.
Trajectory integrate_core(const RhsFn& rhs, double w_from, double w_to, double y_init,
                          const IntegrateOptions& opts = {});

// sigma-slope of the departing parabola y = (l w)^2 at the left equilibrium
// (class A); the minus-branch root. nullopt when no positive solution departs
// (c + h'(0) <= 0 or a negative discriminant).
std::optional<double> startup_slope_forward(const ReducedProblem& rp, double c);

// Class-C departing slope: the unique positive root of the startup quadratic
// (f'(0) <= 0 makes the product of roots non-positive).
double startup_slope_forward_C(const ReducedProblem& rp, double c);

// sigma-slope q of y = (q x)^2 / 2, x = D1 - w, at the right equilibrium.
double startup_slope_backward(const ReducedProblem& rp, double c);

// Solution of the forward Cauchy problem y(0) = 0 up to w_stop.
Trajectory forward_solution(const ReducedProblem& rp, double c, double w_stop,
                            const IntegrateOptions& opts = {});

// Solution of the backward Cauchy problem y(D1) = 0 down to w_stop.
Trajectory backward_solution(const ReducedProblem& rp, double c, double w_stop,
                             const IntegrateOptions& opts = {});

// Plateau integral of the convection term: psi(u) = (c u + h(u) - h(0)) / eps^2.
// Where f vanishes, the positive forward solution is y = 1 - sqrt(1 - psi^2).
double plateau_psi(const ReducedProblem& rp, double c, double u);

// Backward analogue for the zero-reaction case:
// psi_back(u) = (c (u - 1) + h(u) - h(1)) / eps^2.
double plateau_psi_back(const ReducedProblem& rp, double c, double u);

// CSV dump: header line with c and status, columns w,y[,u].
void dump_trajectory_csv(const Trajectory& traj, const ReducedProblem& rp, std::ostream& os,
                         bool include_u = true);

}  // namespace qfb
