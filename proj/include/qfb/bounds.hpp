#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qfb/model.hpp"
#include "qfb/speed.hpp"

namespace qfb {

struct ConditionEntry {
  std::string id;        // stable id: stimah, necessf_1, accaB1_1, ...
  std::string paper_eq;  // the inequality in display form
  int satisfied = -1;    // 1 pass, 0 fail, -1 not applicable / informational
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  // The B/C sufficient conditions are stated for constant d; with a
  // density-dependent diffusion they carry this caveat instead of a guess at
  // the modified inequalities.
  bool caveat_density = false;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  double F_plus = std::numeric_limits<double>::quiet_NaN();
  double F_minus = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double zeta = std::numeric_limits<double>::quiet_NaN();
  double xi0 = std::numeric_limits<double>::quiet_NaN();
  bool heuristic_params = false;  // eta/kappa/zeta came from the convenience sweep

  const ConditionEntry* find(const std::string& id) const;
  bool all_pass(std::initializer_list<const char*> ids) const;
  std::string to_json() const;
};

// 2 eps sqrt(d(0) f'(0)) - h'(0); class A only.
double lower_bound_A(const ProblemSpec& spec);

// 2 eps sqrt(sup d(u) f(u)/u) - min h'; sup/min on a 4001-point grid with
// golden-section refinement, the u->0 limit of f(u)/u supplied by f'(0).
double upper_bound_A(const ProblemSpec& spec);

// h(u0) - h(0) < 1 (necessary for a positive admissible speed, class B/C).
ConditionEntry check_stimah(const ProblemSpec& spec);

// int f > 0 and int f^- < 1, class C (n/a entries otherwise).
std::vector<ConditionEntry> check_necessf(const ProblemSpec& spec);

// F+ = int_0^1 f^+, F- = int_0^1 f^-, by adaptive quadrature split at u0.
void reaction_integrals(const ProblemSpec& spec, double* F_plus, double* F_minus);

// xi0 in (u0, 1) with int_{xi0}^1 f = tail.
double solve_xi0(const ProblemSpec& spec, double tail);

// Sufficient conditions for a positive speed, class B. Case F+ < 1 needs only
// eta in (0, min{F+,1}); F+ >= 1 also needs kappa in (0, eta).
std::vector<ConditionEntry> check_accaB(const ProblemSpec& spec, double eta,
                                        std::optional<double> kappa, double* xi0_out = nullptr);

// Sufficient conditions for a positive speed, class C (requires necessf).
// eta in (0, min{F+,1} - F-); case F+ >= 1 needs zeta in (0, 1 - F- - eta).
std::vector<ConditionEntry> check_accaC(const ProblemSpec& spec, double eta,
                                        std::optional<double> zeta, double* xi0_out = nullptr);

// [c*_f - max h', c*_f - min h'] where c*_f solves the h==0 companion problem.
std::pair<double, double> speed_interval_estimate(const ProblemSpec& spec,
                                                  const SolverOptions& opts = {},
                                                  double* companion_speed = nullptr);

// [-2 eps sqrt(d0 f'(u0)) - max h', 2 eps sqrt(d1 f'(u0)) - min h'].
std::pair<double, double> fisher_interval(const ProblemSpec& spec);

// Finiteness of k = sup f/u and l = sup f/(1-u); an infinite value flags a
// sharp-wave risk.
std::vector<ConditionEntry> check_proper_wave(const ProblemSpec& spec);

struct ReportParams {
  std::optional<double> eta, kappa, zeta;
  bool run_companion = true;  // stimarozza needs a companion speed solve
  SolverOptions solver;
};

// Every applicable condition for the spec's class, with derived quantities.
// When eta (and kappa/zeta) are absent for class B/C, a coarse deterministic
// sweep picks the best margin and the report is flagged heuristic.
ConditionReport build_report(const ProblemSpec& spec, const ReportParams& params = {});

}  // namespace qfb
