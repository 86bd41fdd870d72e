#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfb/integrate.hpp"
#include "qfb/numerics.hpp"
#include "qfb/speed.hpp"

namespace qfb {

// Traveling-wave profile v(t), anchored at v(0) = anchor, truncated where v
// is within tol_v of the equilibria.
struct WaveProfile {
  std::vector<double> t, v, vp;
  double c = 0.0;
  double epsilon = 1.0;
  double residual_sup = 0.0;  // sup |eps^2 (P((D v)'))' - (c+h'(v)) v' + f(v)| by centered FD
  double max_slope = 0.0;     // max v' over the samples
};

struct ProfileOptions {
  double t_step = 1e-3;
  double anchor = 0.5;
  double tol_v = 1e-6;
  long max_steps = 4'000'000;
};

// The matched y(w) of the connection at speed c, interpolated for off-grid
// queries (monotone cubic through the trajectory samples).
num::Pchip matched_connection(const ReducedProblem& rp, double c,
                              const IntegrateOptions& opts = {});

// Integrate v' = R(y(D(v))) / d(v) from the anchor in both directions and
// attach the finite-difference residual of the second-order wave equation.
WaveProfile reconstruct_wave(const ReducedProblem& rp, double c, const num::Pchip& y_of_w,
                             const ProfileOptions& opts = {});

struct EpsilonScanRow {
  double epsilon = 1.0;
  double c_star = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();  // c_star / epsilon
  bool found = false;
  std::string kind;  // HalfLine | Unique | NotFound(reason)
};

// Solve the speed problem for each viscosity; failed rows are recorded and
// the scan continues.
std::vector<EpsilonScanRow> epsilon_scan(const ProblemSpec& spec,
                                         const std::vector<double>& eps_list,
                                         const SolverOptions& opts = {});

void dump_profile_csv(const WaveProfile& p, std::ostream& os, bool include_vp = true);
void dump_epsilon_csv(const std::vector<EpsilonScanRow>& rows, std::ostream& os);

}  // namespace qfb
