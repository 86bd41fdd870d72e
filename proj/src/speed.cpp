#include "qfb/speed.hpp"

#include <algorithm>
#include <cmath>

#include "qfb/bounds.hpp"
#include "qfb/burgers.hpp"

namespace qfb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

// Census of the recorded (defined, non-trivial) probes: +1 all positive,
// -1 all negative, 0 mixed, 2 none recorded.
int probe_census(const std::vector<ProbeRecord>& probes) {
  bool pos = false, neg = false, any = false;
  for (const auto& p : probes) {
    if (p.trivial_forward || p.sign == 0) continue;
    any = true;
    (p.sign > 0 ? pos : neg) = true;
  }
  if (!any) return 2;
  if (pos && neg) return 0;
  return pos ? 1 : -1;
}

void audit_monotone(SpeedResult& r) {
  auto sorted = r.probes;
  std::sort(sorted.begin(), sorted.end(),
            [](const ProbeRecord& a, const ProbeRecord& b) { return a.c < b.c; });
  int prev = -2;
  for (const auto& p : sorted) {
    if (p.sign == 0) continue;
    if (prev != -2 && p.sign < prev) {
      r.kind = SpeedKind::NotFound;
      r.reason = "non-monotone";
      return;
    }
    prev = p.sign;
  }
}

void attach_evidence(SpeedResult& r, const ReducedProblem& rp, const SolverOptions& opts) {
  bool fwd_blow = false, bwd_blow = false;
  for (const auto& p : r.probes) {
    fwd_blow |= p.forward == TerminationKind::HitOne;
    bwd_blow |= p.backward == TerminationKind::HitOne;
  }
  r.both_blow_up = fwd_blow && bwd_blow;
  double c_ref = 0.0;
  if (!(c_ref >= r.bracket_used.first && c_ref <= r.bracket_used.second)) {
    c_ref = 0.5 * (r.bracket_used.first + r.bracket_used.second);
  }
  r.evidence_c = c_ref;
  try {
    r.backward_evidence = backward_solution(rp, c_ref, 0.0, opts.integ).status;
  } catch (const IntegrationFault&) {
    r.backward_evidence = std::nullopt;
  }
}

}  // namespace

bool admissible_A(const ReducedProblem& rp, double c, const SolverOptions& opts) {
  const double delta = opts.integ.delta_scale * rp.D1();
  const Trajectory back = backward_solution(rp, c, delta, opts.integ);
  switch (back.status.kind) {
    case TerminationKind::ReachedEnd: return back.terminal_y() <= opts.tol_match;
    case TerminationKind::HitZero:
      // only the supercritical hug of the left equilibrium produces this
      // (y- > 0 strictly on (0,D1) and y-(0) > 0 in the spiral regime)
      return true;
    default: return false;
  }
}

SpeedResult critical_speed_A(const ReducedProblem& rp, const SolverOptions& opts) {
  SpeedResult r;
  const ProblemSpec& spec = rp.spec();
  double lo = lower_bound_A(spec);
  double hi = std::max(lo, upper_bound_A(spec));
  if (opts.bracket_override) {
    lo = opts.bracket_override->first;
    hi = opts.bracket_override->second;
  }

  auto probe = [&](double c) {
    const bool ok = admissible_A(rp, c, opts);
    ProbeRecord rec;
    rec.c = c;
    rec.sign = ok ? 1 : -1;
    rec.defined = true;
    r.probes.push_back(rec);
    ++r.iterations;
    return ok;
  };

  if (!probe(hi)) {
    hi += 1.0;  // analytic upper bound can fail by a hair numerically
    if (!probe(hi)) {
      r.kind = SpeedKind::NotFound;
      r.reason = "upper-bound-inadmissible";
      r.bracket_used = {lo, hi};
      return r;
    }
  }
  r.bracket_used = {lo, hi};
  if (lo >= hi || probe(lo)) {
    r.kind = SpeedKind::HalfLine;
    r.c_star = lo;
    const double delta = opts.integ.delta_scale * rp.D1();
    r.residual = backward_solution(rp, lo, delta, opts.integ).terminal_y();
    audit_monotone(r);
    return r;
  }
  while (hi - lo > opts.tol_c) {
    const double mid = 0.5 * (lo + hi);
    (probe(mid) ? hi : lo) = mid;
  }
  r.kind = SpeedKind::HalfLine;
  r.c_star = 0.5 * (lo + hi);
  const double delta = opts.integ.delta_scale * rp.D1();
  r.residual = backward_solution(rp, hi, delta, opts.integ).terminal_y();
  audit_monotone(r);
  return r;
}

ProbeRecord mismatch_BC(const ReducedProblem& rp, double c, const SolverOptions& opts) {
  ProbeRecord rec;
  rec.c = c;
  const double w0 = rp.w0();

  const Trajectory fwd = forward_solution(rp, c, w0, opts.integ);
  rec.forward = fwd.status.kind;
  double y_plus = 0.0;
  bool fwd_defined = true;
  switch (fwd.status.kind) {
    case TerminationKind::ReachedEnd: y_plus = fwd.terminal_y(); break;
    case TerminationKind::Trivial:
      y_plus = 0.0;
      rec.trivial_forward = true;
      break;
    case TerminationKind::HitOne:
      rec.mismatch = kInf;
      rec.sign = 1;
      fwd_defined = false;
      break;
    case TerminationKind::HitZero:
      y_plus = 0.0;
      rec.trivial_forward = true;
      break;
  }

  Trajectory bwd;
  try {
    bwd = backward_solution(rp, c, w0, opts.integ);
  } catch (const IntegrationFault&) {
    rec.backward = TerminationKind::HitOne;
    if (!fwd_defined) {
      rec.sign = 0;  // both sides blew up: excluded from bracketing
      rec.mismatch = std::numeric_limits<double>::quiet_NaN();
    } else {
      rec.mismatch = -kInf;
      rec.sign = -1;
    }
    return rec;
  }
  rec.backward = bwd.status.kind;

  if (bwd.status.kind == TerminationKind::HitOne || bwd.status.kind == TerminationKind::Trivial) {
    if (!fwd_defined) {
      rec.sign = 0;
      rec.mismatch = std::numeric_limits<double>::quiet_NaN();
    } else {
      rec.mismatch = -kInf;
      rec.sign = -1;
    }
    return rec;
  }
  if (bwd.status.kind == TerminationKind::HitZero) {
    // numerical reach-around on the plateau: y- cannot vanish right of w0
    if (fwd_defined && y_plus > 0.0) {
      rec.mismatch = kInf;
      rec.sign = 1;
    } else {
      rec.sign = 0;
      rec.mismatch = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
  }
  if (!fwd_defined) return rec;  // forward HitOne, backward fine: +inf already set

  rec.mismatch = y_plus - bwd.terminal_y();
  rec.sign = sign_of(rec.mismatch);
  rec.defined = true;
  return rec;
}

namespace {

SpeedResult zero_reaction_speed(const ReducedProblem& rp, const SolverOptions& opts) {
  SpeedResult r;
  const BurgersResult b = burgers_speed(rp.spec(), 0.0, 1.0);
  r.bracket_used = {b.speed, b.speed};
  if (!b.admissible) {
    r.kind = SpeedKind::NotFound;
    r.reason = "zero-reaction-not-admissible";
    return r;
  }
  r.kind = SpeedKind::Unique;
  r.c_star = b.speed;
  ProbeRecord rec = mismatch_BC(rp, b.speed, opts);
  r.probes.push_back(rec);
  r.residual = rec.defined ? std::abs(rec.mismatch) : 0.0;
  r.iterations = 1;
  r.reason = b.direction == WaveDirection::Decreasing ? "decreasing-connection" : "";
  return r;
}

}  // namespace

SpeedResult unique_speed_BC(const ReducedProblem& rp, const SolverOptions& opts) {
  SpeedResult r;
  const ProblemSpec& spec = rp.spec();

  auto interval = opts.bracket_override ? *opts.bracket_override : fisher_interval(spec);
  double lo = interval.first, hi = interval.second;
  r.bracket_used = {lo, hi};

  auto probe = [&](double c) {
    r.probes.push_back(mismatch_BC(rp, c, opts));
    ++r.iterations;
    return r.probes.back();
  };

  ProbeRecord plo = probe(lo), phi = probe(hi);
  if (plo.sign == 0 && phi.sign == 0) {
    // stimaconfisher assumes existence; allow one widening before giving up
    lo -= 0.5;
    hi += 0.5;
    plo = probe(lo);
    phi = probe(hi);
    r.bracket_used = {lo, hi};
    if (plo.sign == 0 && phi.sign == 0) {
      r.kind = SpeedKind::NotFound;
      r.reason = "undefined-probes";
      attach_evidence(r, rp, opts);
      return r;
    }
  }

  // establish a sign bracket, scanning if an endpoint is uninformative
  auto scan_for_bracket = [&]() -> bool {
    const int n = 33;
    double prev_c = lo;
    int prev_sign = plo.sign;
    for (int i = 1; i <= n; ++i) {
      const double c = lo + (hi - lo) * i / n;
      const ProbeRecord p = (i == n) ? phi : probe(c);
      if (p.sign == 0) continue;
      if (prev_sign < 0 && p.sign > 0) {
        lo = prev_c;
        hi = c;
        return true;
      }
      prev_c = c;
      prev_sign = p.sign;
    }
    return false;
  };

  bool bracketed = plo.sign < 0 && phi.sign > 0;
  if (!bracketed) bracketed = scan_for_bracket();
  if (!bracketed) {
    r.kind = SpeedKind::NotFound;
    const int census = probe_census(r.probes);
    r.reason = census == 0 ? "no-match" : "no-sign-change";
    audit_monotone(r);
    attach_evidence(r, rp, opts);
    return r;
  }

  // Bisect towards |M| <= tol_match. The loop runs past tol_c down to a hard
  // width floor so a genuine root is distinguished from a sign discontinuity
  // (trivial-to-positive jumps, blow-up boundaries).
  const double width_floor = std::max(1e-11, 1e-9 * (std::abs(lo) + std::abs(hi) + 1.0));
  std::optional<double> matched;
  double matched_residual = 0.0;
  while (hi - lo > width_floor) {
    const double mid = 0.5 * (lo + hi);
    const ProbeRecord p = probe(mid);
    if (p.defined && !p.trivial_forward && std::abs(p.mismatch) <= opts.tol_match) {
      matched = mid;
      matched_residual = std::abs(p.mismatch);
      break;
    }
    if (p.sign == 0) {
      // undefined mid-probe: deflect by a quarter-width, then give up
      const double alt = mid + 0.25 * (hi - lo);
      const ProbeRecord p2 = probe(alt);
      if (p2.sign == 0) {
        r.kind = SpeedKind::NotFound;
        r.reason = "undefined-probes";
        attach_evidence(r, rp, opts);
        return r;
      }
      (p2.sign < 0 ? lo : hi) = alt;
      continue;
    }
    (p.sign < 0 ? lo : hi) = mid;
  }

  audit_monotone(r);
  if (r.reason == "non-monotone") {
    r.kind = SpeedKind::NotFound;
    attach_evidence(r, rp, opts);
    return r;
  }

  if (matched) {
    r.kind = SpeedKind::Unique;
    r.c_star = *matched;
    r.residual = matched_residual;
    return r;
  }
  r.kind = SpeedKind::NotFound;
  r.reason = probe_census(r.probes) == 0 ? "no-match" : "no-sign-change";
  attach_evidence(r, rp, opts);
  return r;
}

SpeedResult find_speed(const ReducedProblem& rp, const SolverOptions& opts) {
  switch (rp.cls()) {
    case ReactionClass::A: return critical_speed_A(rp, opts);
    case ReactionClass::B:
    case ReactionClass::C: return unique_speed_BC(rp, opts);
    case ReactionClass::Zero: return zero_reaction_speed(rp, opts);
  }
  throw std::logic_error("unreachable reaction class");
}

}  // namespace qfb
