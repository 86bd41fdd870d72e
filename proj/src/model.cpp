#include "qfb/model.hpp"

#include <algorithm>
#include <cmath>

#include "qfb/numerics.hpp"

namespace qfb {

namespace {

constexpr double kZeroTol = 1e-14;   // |f| below this counts as identically zero
constexpr double kU0Tol = 1e-10;
constexpr int kClassifyGrid = 2001;
constexpr int kHypGrid = 1001;

}  // namespace

std::string to_string(ReactionClass c) {
  switch (c) {
    case ReactionClass::A: return "A";
    case ReactionClass::B: return "B";
    case ReactionClass::C: return "C";
    case ReactionClass::Zero: return "Zero";
  }
  return "?";
}

ReactionClass reaction_class_from_string(const std::string& s) {
  if (s == "A") return ReactionClass::A;
  if (s == "B") return ReactionClass::B;
  if (s == "C") return ReactionClass::C;
  if (s == "Zero" || s == "zero") return ReactionClass::Zero;
  throw std::invalid_argument("unknown reaction class '" + s + "'");
}

Classification classify_reaction(const Expr& f) {
  const int n = kClassifyGrid;
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = f.eval(static_cast<double>(i) / (n - 1));

  bool all_zero = true;
  for (double v : vals) {
    if (std::abs(v) > kZeroTol) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) return {ReactionClass::Zero, 0.0};

  // Indices of the first interior point that is non-zero beyond tolerance.
  int first_nonzero = -1;
  for (int i = 1; i < n - 1; ++i) {
    if (std::abs(vals[i]) > kZeroTol) {
      first_nonzero = i;
      break;
    }
  }
  if (first_nonzero < 0) throw UnclassifiableReaction("reaction vanishes on the whole grid interior");

  // No negative values anywhere: class A or B.
  bool has_negative = false;
  for (int i = 1; i < n - 1; ++i) {
    if (vals[i] < -kZeroTol) {
      has_negative = true;
      break;
    }
  }

  if (!has_negative) {
    // must be positive from first_nonzero on
    for (int i = first_nonzero; i < n - 1; ++i) {
      if (vals[i] < -kZeroTol) throw UnclassifiableReaction("sign pattern matches no class");
      if (std::abs(vals[i]) <= kZeroTol && i > first_nonzero + 1 && i < n - 2) {
        // interior re-vanishing after turning positive
        throw UnclassifiableReaction("reaction vanishes again after becoming positive");
      }
    }
    if (first_nonzero == 1) return {ReactionClass::A, 0.0};
    // Class B: refine the supremum of the zero plateau by bisecting the
    // positivity predicate between the last zero node and the first positive.
    const double lo = static_cast<double>(first_nonzero - 1) / (n - 1);
    const double hi = static_cast<double>(first_nonzero) / (n - 1);
    const double u0 = num::bisect_predicate(
        [&f](double x) { return f.eval(x) > kZeroTol; }, lo, hi, kU0Tol * 1e-3);
    return {ReactionClass::B, u0};
  }

  // Class C: a unique sign change from negative to positive.
  if (vals[first_nonzero] > 0.0)
    throw UnclassifiableReaction("reaction positive before its negative part");
  int change = -1;
  for (int i = first_nonzero; i < n - 2; ++i) {
    if (vals[i] < -kZeroTol && vals[i + 1] > kZeroTol) {
      if (change >= 0) throw UnclassifiableReaction("multiple sign changes");
      change = i;
    } else if (vals[i] > kZeroTol && vals[i + 1] < -kZeroTol) {
      throw UnclassifiableReaction("reaction turns negative after its positive part");
    }
  }
  if (change < 0) throw UnclassifiableReaction("no negative-to-positive sign change found");
  const double lo = static_cast<double>(change) / (n - 1);
  const double hi = static_cast<double>(change + 1) / (n - 1);
  const double u0 = num::bisect_root([&f](double x) { return f.eval(x); }, lo, hi, kU0Tol * 1e-2);
  return {ReactionClass::C, u0};
}

ProblemSpec ProblemSpec::make(const std::string& f_text, const std::string& h_text,
                              const std::string& D_text, double epsilon,
                              std::optional<ReactionClass> class_override) {
  ProblemSpec s;
  s.f = Expr::parse(f_text);
  s.h = Expr::parse(h_text.empty() ? "0" : h_text);
  s.D = Expr::parse(D_text.empty() ? "u" : D_text);
  s.fp = s.f.derivative();
  s.hp = s.h.derivative();
  s.d = s.D.derivative();

  if (!(epsilon > 0.0)) throw HypothesisError("(P)", "epsilon must be positive");
  s.epsilon = epsilon;

  if (std::abs(s.D.eval(0.0)) > 1e-12)
    throw HypothesisError("(D)", "D(0) must vanish, got " + std::to_string(s.D.eval(0.0)));
  double dmin = s.d.eval(0.0), dmax = dmin;
  for (int i = 1; i < kHypGrid; ++i) {
    const double v = s.d.eval(static_cast<double>(i) / (kHypGrid - 1));
    dmin = std::min(dmin, v);
    dmax = std::max(dmax, v);
  }
  // local refinement of the grid extrema
  dmin = std::min(dmin, num::grid_min([&s](double u) { return s.d.eval(u); }, 0.0, 1.0, kHypGrid));
  dmax = std::max(dmax, num::grid_max([&s](double u) { return s.d.eval(u); }, 0.0, 1.0, kHypGrid));
  if (!(dmin > 0.0))
    throw HypothesisError("(D)", "d = D' must be positive on [0,1], min " + std::to_string(dmin));
  s.d_min = dmin;
  s.d_max = dmax;
  s.D1 = s.D.eval(1.0);

  s.h0 = s.h.eval(0.0);
  if (!std::isfinite(s.h0)) throw HypothesisError("(H)", "h(0) is not finite");

  Classification cl = class_override ? Classification{*class_override, 0.0}
                                     : classify_reaction(s.f);
  if (class_override && (*class_override == ReactionClass::B || *class_override == ReactionClass::C)) {
    // still locate u0 for an overridden B/C class
    cl = classify_reaction(s.f);
    if (cl.cls != *class_override)
      throw UnclassifiableReaction("class override disagrees with the detected sign pattern");
  }
  s.cls = cl.cls;
  s.u0 = cl.u0;

  if (s.cls != ReactionClass::Zero) {
    if (std::abs(s.f.eval(0.0)) > 1e-10)
      throw HypothesisError("(F)", "f(0) must vanish, got " + std::to_string(s.f.eval(0.0)));
    if (std::abs(s.f.eval(1.0)) > 1e-10)
      throw HypothesisError("(F)", "f(1) must vanish, got " + std::to_string(s.f.eval(1.0)));
  }
  return s;
}

double curvature_Q(double s) {
  // 1 - 1/sqrt(1+s^2) in a cancellation-free form
  const double r = std::sqrt(1.0 + s * s);
  return s * s / (r * (1.0 + r));
}

double curvature_R(double y) {
  if (y <= 0.0) return 0.0;
  return std::sqrt(y * (2.0 - y)) / (1.0 - y);
}

const SaturationPair& curvature_pair() {
  static const SaturationPair pair{&curvature_Q, &curvature_R, "curvature"};
  return pair;
}

ReducedProblem::ReducedProblem(ProblemSpec spec, const SaturationPair& pair)
    : spec_(std::move(spec)), pair_(pair) {
  inv_eps_sq_ = 1.0 / (spec_.epsilon * spec_.epsilon);
  w0_ = spec_.cls == ReactionClass::Zero ? spec_.D.eval(0.5) : spec_.D.eval(spec_.u0);
  // Seed table for the Newton inversion of D (immutable after construction).
  const int n = 4097;
  seed_u_.resize(n);
  // D is strictly increasing; invert on a uniform w grid by marching a bisection
  double lo = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = spec_.D1 * i / (n - 1);
    double a = lo, b = 1.0;
    for (int it = 0; it < 60 && b - a > 1e-15; ++it) {
      const double mid = 0.5 * (a + b);
      (spec_.D.eval(mid) >= w ? b : a) = mid;
    }
    seed_u_[i] = 0.5 * (a + b);
    lo = a;
  }
}

double ReducedProblem::invert_D(double w) const {
  const double D1 = spec_.D1;
  if (w < -1e-9 * D1 || w > D1 * (1.0 + 1e-9)) {
    throw std::invalid_argument("invert_D: w outside [0, D1]");
  }
  if (w <= 0.0) return 0.0;
  if (w >= D1) return 1.0;
  const double t = w / D1 * (seed_u_.size() - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), seed_u_.size() - 2);
  double u = seed_u_[i] + (seed_u_[i + 1] - seed_u_[i]) * (t - i);
  // Newton refinement with a bisection safeguard
  double a = seed_u_[i], b = seed_u_[i + 1];
  for (int it = 0; it < 50; ++it) {
    const double g = spec_.D.eval(u) - w;
    if (std::abs(g) <= 1e-13 * std::max(1.0, D1)) return u;
    (g > 0.0 ? b : a) = u;
    const double dp = spec_.d.eval(u);
    double next = u - g / dp;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    u = next;
  }
  return u;
}

}  // namespace qfb
