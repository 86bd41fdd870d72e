#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qfb/expr.hpp"

namespace qfb {

// A hypothesis on the problem data failed numerical verification. `tag` names
// the failing hypothesis: "(D)", "(H)", "(F)" or "(P)".
class HypothesisError : public std::runtime_error {
public:
  HypothesisError(std::string tag, const std::string& what)
      : std::runtime_error(tag + " " + what), tag_(std::move(tag)) {}
  const std::string& tag() const { return tag_; }

private:
  std::string tag_;
};

class UnclassifiableReaction : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape of the reaction term near 0:
//   A:    f > 0 on (0,1)
//   B:    f == 0 on [0,u0], f > 0 on (u0,1)
//   C:    f < 0 on (0,u0), f > 0 on (u0,1)
//   Zero: f == 0
enum class ReactionClass { A, B, C, Zero };

std::string to_string(ReactionClass c);
ReactionClass reaction_class_from_string(const std::string& s);

struct Classification {
  ReactionClass cls;
  double u0 = 0.0;  // 0 for class A, unused for Zero
};

// Locates u0 to 1e-10 with a 2001-point sign scan plus bisection refinement.
// For class B, u0 is the supremum of the zero plateau.
Classification classify_reaction(const Expr& f);

// Validated problem data: reaction f, convection h, diffusion D, viscosity
// epsilon, plus the derived quantities used throughout.
//
// h is normalised so that h(0) = 0 (only h' and differences of h enter any
// formula); evaluate it through h_val().
struct ProblemSpec {
  Expr f, h, D;
  Expr fp, hp, d;  // symbolic f', h', D'
  double epsilon = 1.0;
  ReactionClass cls = ReactionClass::A;
  double u0 = 0.0;
  double D1 = 1.0;   // D(1)
  double h0 = 0.0;   // raw h(0), subtracted everywhere
  double d_min = 1.0, d_max = 1.0;  // range of d over the check grid

  double h_val(double u) const { return h.eval(u) - h0; }
  double w0() const { return D.eval(u0); }

  // Parses and validates. Checks, in order: D(0)=0 and d>0 on a 1001-point
  // grid (D); h finite with h(0) subtracted (H); f(0)=f(1)=0 (F) unless the
  // reaction is identically zero; classification (or the supplied override).
  static ProblemSpec make(const std::string& f_text, const std::string& h_text,
                          const std::string& D_text, double epsilon = 1.0,
                          std::optional<ReactionClass> class_override = std::nullopt);
};

// The saturation pair (Q, R): R is the functional inverse of Q. Fixed to the
// curvature instance here but kept swappable.
struct SaturationPair {
  double (*Q)(double);
  double (*R)(double);
  const char* name;
};

const SaturationPair& curvature_pair();

// Mean-curvature instance: Q(s) = 1 - 1/sqrt(1+s^2), R(y) = sqrt(y(2-y))/(1-y).
double curvature_Q(double s);
double curvature_R(double y);

// Data of the reduced first-order two-point problem on [0, D1]:
//   y' = (c + hp_hat(w)) / (eps^2 * d_hat(w)) * R(y) - f_hat(w) / eps^2
// with y(0) = y(D1) = 0. All evaluators are pure; the D-inverse seed table is
// precomputed at construction so the object can be shared across threads.
class ReducedProblem {
public:
  explicit ReducedProblem(ProblemSpec spec, const SaturationPair& pair = curvature_pair());

  // u in [0,1] with |D(u) - w| <= 1e-12.
  double invert_D(double w) const;

  double f_hat(double w) const { return spec_.f.eval(invert_D(w)); }
  double hp_hat(double w) const { return spec_.hp.eval(invert_D(w)); }
  double d_hat(double w) const { return spec_.d.eval(invert_D(w)); }

  double R(double y) const { return pair_.R(y); }
  double Q(double s) const { return pair_.Q(s); }

  double rhs(double w, double y, double c) const {
    const double u = invert_D(w);
    return ((c + spec_.hp.eval(u)) / spec_.d.eval(u) * pair_.R(y) - spec_.f.eval(u)) * inv_eps_sq_;
  }

  double D1() const { return spec_.D1; }
  double w0() const { return w0_; }
  double epsilon() const { return spec_.epsilon; }
  double eps_sq() const { return 1.0 / inv_eps_sq_; }
  ReactionClass cls() const { return spec_.cls; }
  const ProblemSpec& spec() const { return spec_; }

private:
  ProblemSpec spec_;
  SaturationPair pair_;
  double inv_eps_sq_ = 1.0;
  double w0_ = 0.0;
  std::vector<double> seed_u_;  // u at uniform w grid, Newton seeds
};

}  // namespace qfb
