#include "qfb/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qfb/numerics.hpp"

namespace qfb {

namespace {

// 1 - sqrt(1 - psi^2) without cancellation for small psi.
double one_minus_sqrt(double psi) {
  const double s = std::sqrt(std::max(0.0, 1.0 - psi * psi));
  return psi * psi / (1.0 + s);
}

struct StepState {
  double w;
  double s;  // sigma = sqrt(y) in the SqrtY chart, plain y otherwise
};

}  // namespace

std::string to_string(const Termination& t) {
  char buf[96];
  switch (t.kind) {
    case TerminationKind::ReachedEnd: return "ReachedEnd";
    case TerminationKind::HitOne:
      std::snprintf(buf, sizeof(buf), "HitOne(w=%.6g)%s", t.w,
                    t.step_underflow ? " [step-underflow]" : "");
      return buf;
    case TerminationKind::HitZero:
      std::snprintf(buf, sizeof(buf), "HitZero(w=%.6g)", t.w);
      return buf;
    case TerminationKind::Trivial: return "Trivial";
  }
  return "?";
}

Trajectory integrate_core(const RhsFn& rhs, double w_from, double w_to, double y_init,
                          const IntegrateOptions& opts) {
  Trajectory traj;
  traj.direction = w_to >= w_from ? Direction::Forward : Direction::Backward;

  const double span = w_to - w_from;
  const double dir = span >= 0.0 ? 1.0 : -1.0;
  const bool sqrt_chart = opts.chart == Chart::SqrtY;
  const double y_cap = 1.0 - opts.tol_blowup;
  const double s_cap = sqrt_chart ? std::sqrt(y_cap) : y_cap;
  const double h_min = 1e-15 * std::max(1.0, std::abs(span));
  // sigma <= 0 within this distance of w_to counts as reaching the endpoint
  const double zero_pad = std::max(4.0 * opts.step, 1e-3 * std::abs(span));

  auto to_y = [&](double s) { return sqrt_chart ? s * s : s; };
  auto deriv = [&](double w, double s) {
    const double y = to_y(s);
    const double dy = rhs(w, y);
    if (!std::isfinite(dy)) throw IntegrationFault("non-finite RHS", w);
    if (!sqrt_chart) return dy;
    return dy / (2.0 * std::max(s, 1e-300));
  };

  StepState st{w_from, sqrt_chart ? std::sqrt(std::max(0.0, y_init)) : y_init};
  traj.samples.emplace_back(st.w, y_init);

  const long n_nodes = std::max<long>(1, std::lround(std::abs(span) / opts.step));
  for (long node = 1; node <= n_nodes; ++node) {
    const double w_node = (node == n_nodes) ? w_to : w_from + span * node / n_nodes;
    // Adaptive substeps inside the base cell; the FD stiffness estimate picks
    // up both the f/(2 sigma) term near y=0 and the R' term near y=1.
    while (dir * (w_node - st.w) > 1e-16 * std::max(1.0, std::abs(w_node))) {
      const double r0 = deriv(st.w, st.s);
      const double ds = std::max(1e-12, 1e-6 * std::abs(st.s));
      const double r1 = deriv(st.w, st.s + ds);
      const double lambda = std::abs(r1 - r0) / ds;
      double h = std::min(std::abs(w_node - st.w), opts.step);
      if (lambda > 0.0) h = std::min(h, 0.8 / lambda);
      if (h < h_min) {
        if (to_y(st.s) >= 0.5) {
          traj.status = {TerminationKind::HitOne, st.w, true};
          traj.samples.emplace_back(st.w, to_y(st.s));
          return traj;
        }
        throw IntegrationFault("step-size underflow", st.w);
      }
      const double hs = h * dir;
      double s_new;
      if (opts.method == IntegrationMethod::RK4) {
        const double k1 = r0;
        const double k2 = deriv(st.w + 0.5 * hs, st.s + 0.5 * hs * k1);
        const double k3 = deriv(st.w + 0.5 * hs, st.s + 0.5 * hs * k2);
        const double k4 = deriv(st.w + hs, st.s + hs * k3);
        s_new = st.s + hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      } else {
        s_new = st.s + hs * r0;
      }
      const double w_new = st.w + hs;
      if (!std::isfinite(s_new)) throw IntegrationFault("non-finite state", w_new);
      if (s_new >= s_cap) {
        traj.status = {TerminationKind::HitOne, w_new, false};
        traj.samples.emplace_back(w_new, y_cap);
        return traj;
      }
      if (s_new <= 0.0) {
        if (std::abs(w_new - w_to) <= zero_pad) {
          // collapsed onto the equilibrium just short of the endpoint
          traj.samples.emplace_back(w_to, 0.0);
          traj.status = {TerminationKind::ReachedEnd, w_to, false};
          return traj;
        }
        traj.status = {TerminationKind::HitZero, w_new, false};
        traj.samples.emplace_back(w_new, 0.0);
        return traj;
      }
      st = {w_new, s_new};
    }
    st.w = w_node;
    traj.samples.emplace_back(st.w, to_y(st.s));
  }
  traj.status = {TerminationKind::ReachedEnd, w_to, false};
  return traj;
}

double plateau_psi(const ReducedProblem& rp, double c, double u) {
  const ProblemSpec& s = rp.spec();
  return (c * u + s.h_val(u)) / rp.eps_sq();
}

double plateau_psi_back(const ReducedProblem& rp, double c, double u) {
  const ProblemSpec& s = rp.spec();
  return (c * (u - 1.0) + s.h_val(u) - s.h_val(1.0)) / rp.eps_sq();
}

std::optional<double> startup_slope_forward(const ReducedProblem& rp, double c) {
  const ProblemSpec& s = rp.spec();
  const double d0 = s.d.eval(0.0);
  const double beta = c + s.hp.eval(0.0);
  if (beta <= 0.0) return std::nullopt;
  const double A = beta / (rp.eps_sq() * d0);
  const double k = s.fp.eval(0.0) / (rp.eps_sq() * d0);
  const double disc = 2.0 * A * A - 8.0 * k;
  if (disc < 0.0) return std::nullopt;
  return (std::sqrt(2.0) * A - std::sqrt(disc)) / 4.0;
}

double startup_slope_forward_C(const ReducedProblem& rp, double c) {
  const ProblemSpec& s = rp.spec();
  const double d0 = s.d.eval(0.0);
  const double A = (c + s.hp.eval(0.0)) / (rp.eps_sq() * d0);
  const double k = s.fp.eval(0.0) / (rp.eps_sq() * d0);  // <= 0 for class C
  const double disc = std::max(0.0, 2.0 * A * A - 8.0 * k);
  return std::max(0.0, (std::sqrt(2.0) * A + std::sqrt(disc)) / 4.0);
}

double startup_slope_backward(const ReducedProblem& rp, double c) {
  const ProblemSpec& s = rp.spec();
  const double d1 = s.d.eval(1.0);
  EvalFlags fl;
  const double A = (c + s.hp.eval(1.0)) / (rp.eps_sq() * d1);
  const double kappa = std::abs(s.fp.eval(1.0, fl)) / (rp.eps_sq() * d1);
  return 0.5 * (-A + std::sqrt(A * A + 4.0 * kappa));
}

namespace {

RhsFn bind_rhs(const ReducedProblem& rp, double c) {
  return [&rp, c](double w, double y) { return rp.rhs(w, y, c); };
}

Trajectory trivial_trajectory(double c, double w_stop, Direction dir, std::string note) {
  Trajectory t;
  t.c = c;
  t.direction = dir;
  t.status = {TerminationKind::Trivial, 0.0, false};
  t.note = std::move(note);
  if (dir == Direction::Forward) {
    t.samples = {{0.0, 0.0}, {w_stop, 0.0}};
  } else {
    t.samples = {{w_stop, 0.0}};
  }
  return t;
}

// Closed-form march of y = 1 - sqrt(1 - psi^2) over [0, w_end] on a reaction
// plateau. Fails into Trivial when psi is non-positive (no positive solution
// departs 0) and into HitOne when psi reaches 1.
Trajectory plateau_closed_form(const ReducedProblem& rp, double c, double w_end, double w_stop,
                               const IntegrateOptions& opts) {
  Trajectory t;
  t.c = c;
  t.direction = Direction::Forward;
  const double target = std::min(w_end, w_stop);
  const double y_cap = 1.0 - opts.tol_blowup;

  // sign of psi just off u=0 decides whether a positive solution departs
  const double u_probe = 1e-8;
  if (plateau_psi(rp, c, u_probe) <= 0.0) {
    return trivial_trajectory(c, w_stop, Direction::Forward,
                              "c u + h(u) - h(0) <= 0 near u=0; only the zero solution departs");
  }

  const long n = std::max<long>(2, std::lround(target / opts.step));
  t.samples.emplace_back(0.0, 0.0);
  double u_prev = 0.0;
  for (long i = 1; i <= n; ++i) {
    const double w = target * i / n;
    const double u = rp.invert_D(w);
    const double psi = plateau_psi(rp, c, u);
    if (psi <= 0.0) {
      // the positive branch dies inside the plateau
      const double u_die = num::bisect_root(
          [&](double x) { return plateau_psi(rp, c, x); }, u_prev, u, 1e-14);
      Trajectory tr = trivial_trajectory(c, w_stop, Direction::Forward,
                                         "positive branch returns to zero inside the plateau");
      tr.status.w = rp.spec().D.eval(u_die);
      return tr;
    }
    if (one_minus_sqrt(psi) >= y_cap || psi >= 1.0) {
      const double u_hit = num::bisect_root(
          [&](double x) { return one_minus_sqrt(std::min(1.0, plateau_psi(rp, c, x))) - y_cap; },
          u_prev, u, 1e-14);
      const double w_hit = rp.spec().D.eval(u_hit);
      t.samples.emplace_back(w_hit, y_cap);
      t.status = {TerminationKind::HitOne, w_hit, false};
      t.note = "closed-form argument reached 1";
      return t;
    }
    t.samples.emplace_back(w, one_minus_sqrt(psi));
    u_prev = u;
  }
  t.status = {TerminationKind::ReachedEnd, target, false};
  return t;
}

// Continue an already-produced forward trajectory numerically up to w_stop.
Trajectory continue_forward(const ReducedProblem& rp, double c, Trajectory head, double w_stop,
                            const IntegrateOptions& opts) {
  const double w_switch = head.terminal_w();
  const double y_switch = head.terminal_y();
  if (y_switch <= 0.0) {
    head.status = {TerminationKind::HitZero, w_switch, false};
    head.note = "vanished at the plateau edge";
    return head;
  }
  Trajectory tail = integrate_core(bind_rhs(rp, c), w_switch, w_stop, y_switch, opts);
  head.samples.insert(head.samples.end(), tail.samples.begin() + 1, tail.samples.end());
  head.status = tail.status;
  head.note = tail.note;
  return head;
}

}  // namespace

Trajectory forward_solution(const ReducedProblem& rp, double c, double w_stop,
                            const IntegrateOptions& opts) {
  const double D1 = rp.D1();
  const double delta = opts.delta_scale * D1;
  Trajectory out;
  switch (rp.cls()) {
    case ReactionClass::A: {
      const auto l = startup_slope_forward(rp, c);
      if (!l) {
        return trivial_trajectory(c, w_stop, Direction::Forward,
                                  "no departing slope (Lemma necessity)");
      }
      const double y0 = (*l * delta) * (*l * delta);
      out = integrate_core(bind_rhs(rp, c), delta, w_stop, y0, opts);
      out.samples.insert(out.samples.begin(), {0.0, 0.0});
      break;
    }
    case ReactionClass::B: {
      Trajectory head = plateau_closed_form(rp, c, rp.w0(), w_stop, opts);
      if (!head.reached_end() || w_stop <= rp.w0()) return head;
      out = continue_forward(rp, c, std::move(head), w_stop, opts);
      break;
    }
    case ReactionClass::Zero: {
      return plateau_closed_form(rp, c, D1, w_stop, opts);
    }
    case ReactionClass::C: {
      const double l = startup_slope_forward_C(rp, c);
      double y0 = (l * delta) * (l * delta);
      if (y0 <= 0.0) {
        // f'(0)=0 and c+h'(0)<=0: seed from the reaction push alone
        y0 = std::max(1e-24 * delta, num::integrate([&](double w) { return -rp.f_hat(w); }, 0.0,
                                                    delta, 1e-16) /
                                         rp.eps_sq());
      }
      out = integrate_core(bind_rhs(rp, c), delta, w_stop, y0, opts);
      out.samples.insert(out.samples.begin(), {0.0, 0.0});
      break;
    }
  }
  out.c = c;
  out.direction = Direction::Forward;
  return out;
}

Trajectory backward_solution(const ReducedProblem& rp, double c, double w_stop,
                             const IntegrateOptions& opts) {
  const double D1 = rp.D1();
  const double delta = opts.delta_scale * D1;
  Trajectory out;
  if (rp.cls() == ReactionClass::Zero) {
    const double u_seed = rp.invert_D(D1 - delta);
    const double psi = plateau_psi_back(rp, c, u_seed);
    if (psi <= 0.0) {
      return trivial_trajectory(c, w_stop, Direction::Backward,
                                "c(u-1) + h(u) - h(1) <= 0 near u=1; only the zero solution");
    }
    if (psi >= 1.0) {
      Trajectory t;
      t.c = c;
      t.direction = Direction::Backward;
      t.samples = {{D1, 0.0}, {D1 - delta, 1.0 - opts.tol_blowup}};
      t.status = {TerminationKind::HitOne, D1 - delta, false};
      return t;
    }
    out = integrate_core(bind_rhs(rp, c), D1 - delta, w_stop, one_minus_sqrt(psi), opts);
  } else {
    const double q = startup_slope_backward(rp, c);
    double y0 = 0.5 * q * q * delta * delta;
    if (y0 <= 0.0) {
      y0 = std::max(1e-24 * delta,
                    num::integrate([&](double w) { return rp.f_hat(w); }, D1 - delta, D1, 1e-16) /
                        rp.eps_sq());
    }
    out = integrate_core(bind_rhs(rp, c), D1 - delta, w_stop, y0, opts);
  }
  out.samples.insert(out.samples.begin(), {D1, 0.0});
  out.c = c;
  out.direction = Direction::Backward;
  return out;
}

void dump_trajectory_csv(const Trajectory& traj, const ReducedProblem& rp, std::ostream& os,
                         bool include_u) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "# c=%.6g status=%s direction=%s\n", traj.c,
                to_string(traj.status).c_str(),
                traj.direction == Direction::Forward ? "forward" : "backward");
  os << buf;
  os << (include_u ? "w,y,u\n" : "w,y\n");
  for (const auto& [w, y] : traj.samples) {
    if (include_u) {
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g\n", w, y, rp.invert_D(std::clamp(w, 0.0, rp.D1())));
    } else {
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g\n", w, y);
    }
    os << buf;
  }
}

}  // namespace qfb
