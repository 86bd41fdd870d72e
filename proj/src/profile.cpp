#include "qfb/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "qfb/burgers.hpp"

namespace qfb {

namespace {

void append_ascending(std::vector<double>& xs, std::vector<double>& ys,
                      const std::vector<std::pair<double, double>>& samples, bool reversed) {
  const auto push = [&](double w, double y) {
    if (!xs.empty() && w <= xs.back()) return;  // drop join duplicates
    xs.push_back(w);
    ys.push_back(std::max(0.0, y));
  };
  if (reversed) {
    for (auto it = samples.rbegin(); it != samples.rend(); ++it) push(it->first, it->second);
  } else {
    for (const auto& s : samples) push(s.first, s.second);
  }
}

}  // namespace

num::Pchip matched_connection(const ReducedProblem& rp, double c, const IntegrateOptions& opts) {
  std::vector<double> xs, ys;
  const double D1 = rp.D1();
  const double delta = opts.delta_scale * D1;

  if (rp.cls() == ReactionClass::Zero) {
    const BurgersResult b = burgers_speed(rp.spec(), 0.0, 1.0);
    if (!b.admissible || std::abs(b.speed - c) > 1e-9)
      throw std::invalid_argument("matched_connection: c is not the zero-reaction speed");
    const long n = std::lround(D1 / opts.step);
    for (long i = 0; i <= n; ++i) {
      const double w = D1 * i / n;
      xs.push_back(w);
      ys.push_back(b.profile_closed_form(w));
    }
    return num::Pchip(std::move(xs), std::move(ys));
  }

  if (rp.cls() == ReactionClass::A) {
    Trajectory back = backward_solution(rp, c, delta, opts);
    if (back.status.kind == TerminationKind::HitOne || back.status.kind == TerminationKind::Trivial)
      throw std::invalid_argument("matched_connection: backward solution does not connect");
    xs.push_back(0.0);
    ys.push_back(0.0);
    append_ascending(xs, ys, back.samples, true);
    return num::Pchip(std::move(xs), std::move(ys));
  }

  // class B / C: forward piece on [0, w0], backward piece on [w0, D1]
  Trajectory fwd = forward_solution(rp, c, rp.w0(), opts);
  Trajectory bwd = backward_solution(rp, c, rp.w0(), opts);
  if (!fwd.reached_end() || !bwd.reached_end())
    throw std::invalid_argument("matched_connection: trajectories do not reach the matching point");
  append_ascending(xs, ys, fwd.samples, false);
  // stitch at the mean of the two matched values
  const double y_mid = 0.5 * (fwd.terminal_y() + bwd.terminal_y());
  if (!xs.empty() && xs.back() >= rp.w0() - 1e-15) ys.back() = y_mid;
  append_ascending(xs, ys, bwd.samples, true);
  return num::Pchip(std::move(xs), std::move(ys));
}

WaveProfile reconstruct_wave(const ReducedProblem& rp, double c, const num::Pchip& y_of_w,
                             const ProfileOptions& opts) {
  const ProblemSpec& spec = rp.spec();
  const double D1 = rp.D1();
  auto slope = [&](double v) {
    const double vv = std::clamp(v, 0.0, 1.0);
    const double w = std::clamp(spec.D.eval(vv), 0.0, D1);
    const double y = std::clamp(y_of_w(w), 0.0, 1.0 - 1e-12);
    return rp.R(y) / spec.d.eval(vv);
  };

  auto march = [&](double dir) {
    std::vector<double> vs;
    double v = opts.anchor;
    const double h = opts.t_step * dir;
    for (long i = 0; i < opts.max_steps; ++i) {
      const double k1 = slope(v);
      const double k2 = slope(v + 0.5 * h * k1);
      const double k3 = slope(v + 0.5 * h * k2);
      const double k4 = slope(v + h * k3);
      const double v_new = v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (dir > 0 ? v_new <= v : v_new >= v)
        throw std::runtime_error("reconstruct_wave: non-monotone profile (bad y interpolant)");
      v = v_new;
      if (v <= opts.tol_v || v >= 1.0 - opts.tol_v) break;
      vs.push_back(v);
    }
    return vs;
  };

  const std::vector<double> left = march(-1.0);   // towards v -> 0
  const std::vector<double> right = march(+1.0);  // towards v -> 1

  WaveProfile p;
  p.c = c;
  p.epsilon = spec.epsilon;
  p.t.reserve(left.size() + right.size() + 1);
  p.v.reserve(left.size() + right.size() + 1);
  for (std::size_t i = left.size(); i-- > 0;) {
    p.t.push_back(-opts.t_step * static_cast<double>(i + 1));
    p.v.push_back(left[i]);
  }
  p.t.push_back(0.0);
  p.v.push_back(opts.anchor);
  for (std::size_t i = 0; i < right.size(); ++i) {
    p.t.push_back(opts.t_step * static_cast<double>(i + 1));
    p.v.push_back(right[i]);
  }

  // velocity samples and the finite-difference residual of
  //   eps^2 (P((D v)'))' - (c + h'(v)) v' + f(v) = 0
  const std::size_t n = p.v.size();
  p.vp.assign(n, 0.0);
  const double dt = opts.t_step;
  const double eps_sq = spec.epsilon * spec.epsilon;
  std::vector<double> P(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double s = (spec.D.eval(p.v[i + 1]) - spec.D.eval(p.v[i - 1])) / (2.0 * dt);
    P[i] = s / std::sqrt(1.0 + s * s);
    p.vp[i] = (p.v[i + 1] - p.v[i - 1]) / (2.0 * dt);
  }
  if (n >= 3) {
    p.vp[0] = slope(p.v[0]);
    p.vp[n - 1] = slope(p.v[n - 1]);
  }
  double sup = 0.0, max_slope = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double dP = (P[i + 1] - P[i - 1]) / (2.0 * dt);
    const double res =
        eps_sq * dP - (c + spec.hp.eval(p.v[i])) * p.vp[i] + spec.f.eval(p.v[i]);
    sup = std::max(sup, std::abs(res));
  }
  for (double w : p.vp) max_slope = std::max(max_slope, w);
  p.residual_sup = sup;
  p.max_slope = max_slope;
  return p;
}

std::vector<EpsilonScanRow> epsilon_scan(const ProblemSpec& spec,
                                         const std::vector<double>& eps_list,
                                         const SolverOptions& opts) {
  std::vector<EpsilonScanRow> rows;
  for (double eps : eps_list) {
    EpsilonScanRow row;
    row.epsilon = eps;
    if (!(eps > 0.0)) {
      row.kind = "NotFound(bad-epsilon)";
      rows.push_back(row);
      continue;
    }
    ProblemSpec scaled = spec;
    scaled.epsilon = eps;
    try {
      const ReducedProblem rp(scaled);
      const SpeedResult res = find_speed(rp, opts);
      if (res.found()) {
        row.found = true;
        row.c_star = res.c_star;
        row.ratio = res.c_star / eps;
        row.kind = res.kind == SpeedKind::HalfLine ? "HalfLine" : "Unique";
      } else {
        row.kind = "NotFound(" + res.reason + ")";
      }
    } catch (const std::exception& e) {
      row.kind = std::string("NotFound(") + e.what() + ")";
    }
    rows.push_back(row);
  }
  return rows;
}

void dump_profile_csv(const WaveProfile& p, std::ostream& os, bool include_vp) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "# c=%.6g epsilon=%.6g residual_sup=%.6g\n", p.c, p.epsilon,
                p.residual_sup);
  os << buf;
  os << (include_vp ? "t,v,vp\n" : "t,v\n");
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    if (include_vp) {
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g\n", p.t[i], p.v[i], p.vp[i]);
    } else {
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g\n", p.t[i], p.v[i]);
    }
    os << buf;
  }
}

void dump_epsilon_csv(const std::vector<EpsilonScanRow>& rows, std::ostream& os) {
  os << "epsilon,c_star,ratio,kind\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%s\n", r.epsilon, r.c_star, r.ratio,
                  r.kind.c_str());
    os << buf;
  }
}

}  // namespace qfb
