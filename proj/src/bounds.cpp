#include "qfb/bounds.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "qfb/burgers.hpp"
#include "qfb/numerics.hpp"

namespace qfb {

namespace {

constexpr int kGrid = 4001;

double min_hp(const ProblemSpec& spec) {
  return num::grid_min([&spec](double u) { return spec.hp.eval(u); }, 0.0, 1.0, kGrid);
}

double max_hp(const ProblemSpec& spec) {
  return num::grid_max([&spec](double u) { return spec.hp.eval(u); }, 0.0, 1.0, kGrid);
}

double fprime_at_u0(const ProblemSpec& spec) {
  EvalFlags fl;
  return spec.fp.eval(spec.u0, fl);  // kink at u0 resolves to the right branch
}

bool density_dependent(const ProblemSpec& spec) {
  return spec.d_max - spec.d_min > 1e-12;
}

ConditionEntry entry(std::string id, std::string eq, double lhs, double rhs, int satisfied,
                     bool caveat = false) {
  ConditionEntry e;
  e.id = std::move(id);
  e.paper_eq = std::move(eq);
  e.lhs = lhs;
  e.rhs = rhs;
  e.satisfied = satisfied;
  e.caveat_density = caveat;
  return e;
}

void require_class(const ProblemSpec& spec, std::initializer_list<ReactionClass> allowed,
                   const char* fn) {
  for (auto c : allowed) {
    if (spec.cls == c) return;
  }
  throw std::invalid_argument(std::string(fn) + ": reaction class " + to_string(spec.cls) +
                              " not supported");
}

}  // namespace

const ConditionEntry* ConditionReport::find(const std::string& id) const {
  for (const auto& e : entries) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

bool ConditionReport::all_pass(std::initializer_list<const char*> ids) const {
  for (const char* id : ids) {
    const ConditionEntry* e = find(id);
    if (!e || e->satisfied != 1) return false;
  }
  return true;
}

double lower_bound_A(const ProblemSpec& spec) {
  require_class(spec, {ReactionClass::A}, "lower_bound_A");
  const double fp0 = spec.fp.eval(0.0);
  if (fp0 < 0.0) throw std::invalid_argument("lower_bound_A: f'(0) must be nonnegative");
  return 2.0 * spec.epsilon * std::sqrt(spec.d.eval(0.0) * fp0) - spec.hp.eval(0.0);
}

double upper_bound_A(const ProblemSpec& spec) {
  require_class(spec, {ReactionClass::A}, "upper_bound_A");
  const double limit0 = spec.d.eval(0.0) * spec.fp.eval(0.0);
  auto g = [&spec, limit0](double u) {
    if (u < 1e-12) return limit0;
    return spec.d.eval(u) * spec.f.eval(u) / u;
  };
  const double sup = std::max(limit0, num::grid_max(g, 0.0, 1.0, kGrid));
  return 2.0 * spec.epsilon * std::sqrt(std::max(0.0, sup)) - min_hp(spec);
}

ConditionEntry check_stimah(const ProblemSpec& spec) {
  require_class(spec, {ReactionClass::B, ReactionClass::C}, "check_stimah");
  const double lhs = spec.h_val(spec.u0);
  return entry("stimah", "h(u0) - h(0) < 1", lhs, 1.0, lhs < 1.0 ? 1 : 0);
}

void reaction_integrals(const ProblemSpec& spec, double* F_plus, double* F_minus) {
  auto fplus = [&spec](double u) { return std::max(0.0, spec.f.eval(u)); };
  auto fminus = [&spec](double u) { return std::max(0.0, -spec.f.eval(u)); };
  // split at u0 so the quadrature never straddles the sign change / kink
  const double u0 = (spec.cls == ReactionClass::B || spec.cls == ReactionClass::C) ? spec.u0 : 0.0;
  double fp = num::integrate(fplus, 0.0, u0, 1e-11) + num::integrate(fplus, u0, 1.0, 1e-11);
  double fm = num::integrate(fminus, 0.0, u0, 1e-11) + num::integrate(fminus, u0, 1.0, 1e-11);
  if (F_plus) *F_plus = fp;
  if (F_minus) *F_minus = fm;
}

std::vector<ConditionEntry> check_necessf(const ProblemSpec& spec) {
  if (spec.cls != ReactionClass::C) {
    return {entry("necessf_1", "int_0^1 f > 0", std::numeric_limits<double>::quiet_NaN(), 0.0, -1),
            entry("necessf_2", "int_0^1 f^- < 1", 0.0, 1.0, -1)};
  }
  double Fp = 0.0, Fm = 0.0;
  reaction_integrals(spec, &Fp, &Fm);
  return {entry("necessf_1", "int_0^1 f > 0", Fp - Fm, 0.0, Fp - Fm > 0.0 ? 1 : 0),
          entry("necessf_2", "int_0^1 f^- < 1", Fm, 1.0, Fm < 1.0 ? 1 : 0)};
}

double solve_xi0(const ProblemSpec& spec, double tail) {
  require_class(spec, {ReactionClass::B, ReactionClass::C}, "solve_xi0");
  auto tail_integral = [&spec](double xi) {
    return num::integrate([&spec](double u) { return spec.f.eval(u); }, xi, 1.0, 1e-11);
  };
  const double full = tail_integral(spec.u0);
  if (tail <= 0.0 || tail >= full)
    throw std::invalid_argument("solve_xi0: tail outside (0, F+)");
  return num::bisect_root([&](double xi) { return tail_integral(xi) - tail; }, spec.u0, 1.0,
                          1e-12);
}

std::vector<ConditionEntry> check_accaB(const ProblemSpec& spec, double eta,
                                        std::optional<double> kappa, double* xi0_out) {
  require_class(spec, {ReactionClass::B}, "check_accaB");
  double Fp = 0.0;
  reaction_integrals(spec, &Fp, nullptr);
  if (!(eta > 0.0 && eta < std::min(Fp, 1.0)))
    throw std::invalid_argument("check_accaB: eta outside (0, min{F+,1})");
  const bool caveat = density_dependent(spec);
  const double h_u0 = spec.h_val(spec.u0);
  const double h_1 = spec.h_val(1.0);

  std::vector<ConditionEntry> out;
  if (Fp < 1.0) {
    const double r1 = std::sqrt(std::max(0.0, 1.0 - (1.0 + eta - Fp) * (1.0 + eta - Fp)));
    const double r2 = (1.0 - Fp) / std::sqrt(Fp * (2.0 - Fp)) * eta;
    out.push_back(entry("accaB1_1", "h(u0)-h(0) < sqrt(1-(1+eta-F+)^2)", h_u0, r1,
                        h_u0 < r1 ? 1 : 0, caveat));
    out.push_back(entry("accaB1_2", "h(1)-h(u0) < (1-F+)/sqrt(F+(2-F+)) eta", h_1 - h_u0, r2,
                        h_1 - h_u0 < r2 ? 1 : 0, caveat));
    return out;
  }
  if (!kappa || !(*kappa > 0.0 && *kappa < eta))
    throw std::invalid_argument("check_accaB: F+ >= 1 needs kappa in (0, eta)");
  const double k = *kappa;
  const double xi0 = solve_xi0(spec, 1.0 - k);
  if (xi0_out) *xi0_out = xi0;
  const double h_xi0 = spec.h_val(xi0);
  const double r1 = std::sqrt(1.0 - eta * eta);
  const double mid = 0.5 * (k + eta);
  const double r2 = std::sqrt(1.0 - mid * mid) - std::sqrt(1.0 - eta * eta);
  const double r3 = 0.5 * (eta - k) * k / std::sqrt(1.0 - k * k);
  out.push_back(
      entry("accaB2_1", "h(u0)-h(0) < sqrt(1-eta^2)", h_u0, r1, h_u0 < r1 ? 1 : 0, caveat));
  out.push_back(entry("accaB2_2", "h(xi0)-h(u0) < sqrt(1-((kappa+eta)/2)^2)-sqrt(1-eta^2)",
                      h_xi0 - h_u0, r2, h_xi0 - h_u0 < r2 ? 1 : 0, caveat));
  out.push_back(entry("accaB2_3", "h(1)-h(xi0) < (eta-kappa)/2 kappa/sqrt(1-kappa^2)",
                      h_1 - h_xi0, r3, h_1 - h_xi0 < r3 ? 1 : 0, caveat));
  return out;
}

std::vector<ConditionEntry> check_accaC(const ProblemSpec& spec, double eta,
                                        std::optional<double> zeta, double* xi0_out) {
  require_class(spec, {ReactionClass::C}, "check_accaC");
  double Fp = 0.0, Fm = 0.0;
  reaction_integrals(spec, &Fp, &Fm);
  auto necessf = check_necessf(spec);
  if (necessf[0].satisfied != 1 || necessf[1].satisfied != 1)
    throw std::invalid_argument("check_accaC: necessf precondition fails");
  if (!(eta > 0.0 && eta < std::min(Fp, 1.0) - Fm))
    throw std::invalid_argument("check_accaC: eta outside (0, min{F+,1} - F-)");
  const bool caveat = density_dependent(spec);
  const double h_u0 = spec.h_val(spec.u0);
  const double h_1 = spec.h_val(1.0);

  std::vector<ConditionEntry> out;
  const double a = Fm + eta;
  const double r1 = (1.0 - a) / std::sqrt(a * (2.0 - a)) * eta;
  out.push_back(entry("accaC1", "h(u0)-h(0) < (1-F--eta)/sqrt((F-+eta)(2-F--eta)) eta", h_u0, r1,
                      h_u0 < r1 ? 1 : 0, caveat));
  if (Fp < 1.0) {
    const double r2 = (1.0 - Fp) / std::sqrt(Fp * (2.0 - Fp)) * (Fp - Fm - eta);
    out.push_back(entry("accaC2", "h(1)-h(u0) < (1-F+)/sqrt(F+(2-F+)) (F+-F--eta)", h_1 - h_u0,
                        r2, h_1 - h_u0 < r2 ? 1 : 0, caveat));
    return out;
  }
  if (!zeta || !(*zeta > 0.0 && *zeta < 1.0 - Fm - eta))
    throw std::invalid_argument("check_accaC: F+ >= 1 needs zeta in (0, 1 - F- - eta)");
  const double z = *zeta;
  const double xi0 = solve_xi0(spec, 1.0 - z);
  if (xi0_out) *xi0_out = xi0;
  const double h_xi0 = spec.h_val(xi0);
  const double mid = 0.5 * (1.0 + z - Fm - eta);
  const double tail = 1.0 - Fm - eta;
  const double r3 = std::sqrt(std::max(0.0, 1.0 - mid * mid)) -
                    std::sqrt(std::max(0.0, 1.0 - tail * tail));
  const double r4 = 0.5 * (1.0 - z - Fm - eta) * z / std::sqrt(1.0 - z * z);
  out.push_back(entry("accaC3_1",
                      "h(xi0)-h(u0) < sqrt(1-((1+zeta-F--eta)/2)^2)-sqrt(1-(1-F--eta)^2)",
                      h_xi0 - h_u0, r3, h_xi0 - h_u0 < r3 ? 1 : 0, caveat));
  out.push_back(entry("accaC3_2", "h(1)-h(xi0) < (1-zeta-F--eta)/2 zeta/sqrt(1-zeta^2)",
                      h_1 - h_xi0, r4, h_1 - h_xi0 < r4 ? 1 : 0, caveat));
  return out;
}

std::pair<double, double> fisher_interval(const ProblemSpec& spec) {
  require_class(spec, {ReactionClass::B, ReactionClass::C, ReactionClass::Zero},
                "fisher_interval");
  const double fpu0 = spec.cls == ReactionClass::Zero ? 0.0 : std::max(0.0, fprime_at_u0(spec));
  const double root_lo = 2.0 * spec.epsilon * std::sqrt(spec.d_min * fpu0);
  const double root_hi = 2.0 * spec.epsilon * std::sqrt(spec.d_max * fpu0);
  return {-root_lo - max_hp(spec), root_hi - min_hp(spec)};
}

std::pair<double, double> speed_interval_estimate(const ProblemSpec& spec,
                                                  const SolverOptions& opts,
                                                  double* companion_speed) {
  require_class(spec, {ReactionClass::B, ReactionClass::C}, "speed_interval_estimate");
  if (spec.cls == ReactionClass::C) {
    auto necessf = check_necessf(spec);
    if (necessf[0].satisfied != 1 || necessf[1].satisfied != 1)
      throw std::invalid_argument("speed_interval_estimate: necessf fails");
  }
  ProblemSpec companion =
      ProblemSpec::make(spec.f.str(), "0", spec.D.str(), spec.epsilon, spec.cls);
  SolverOptions sopts = opts;
  sopts.bracket_override.reset();
  const SpeedResult res = unique_speed_BC(ReducedProblem(companion), sopts);
  if (res.kind != SpeedKind::Unique)
    throw std::runtime_error("speed_interval_estimate: companion h==0 solve failed (" +
                             res.reason + ")");
  if (companion_speed) *companion_speed = res.c_star;
  return {res.c_star - max_hp(spec), res.c_star - min_hp(spec)};
}

std::vector<ConditionEntry> check_proper_wave(const ProblemSpec& spec) {
  auto ratio_sup = [&spec](bool at_zero) {
    const double limit = at_zero ? spec.fp.eval(0.0) : -spec.fp.eval(1.0);
    auto g = [&spec, at_zero, limit](double u) {
      const double den = at_zero ? u : 1.0 - u;
      if (den < 1e-12) return limit;
      return spec.f.eval(u) / den;
    };
    double sup = std::max(limit, num::grid_max(g, 0.0, 1.0, kGrid));
    // probe into the corner: an unbounded ratio keeps growing
    bool infinite = false;
    double prev = sup;
    for (double e = 1e-6; e >= 1e-12; e *= 1e-2) {
      const double v = g(at_zero ? e : 1.0 - e);
      if (v > 10.0 * (sup + 1.0) && v > prev) infinite = true;
      prev = v;
    }
    return infinite ? std::numeric_limits<double>::infinity() : sup;
  };
  const double k = spec.cls == ReactionClass::Zero ? 0.0 : ratio_sup(true);
  const double l = spec.cls == ReactionClass::Zero ? 0.0 : ratio_sup(false);
  return {entry("proper_wave_k", "f(u) <= k u with k finite", k,
                std::numeric_limits<double>::quiet_NaN(), std::isfinite(k) ? 1 : 0),
          entry("proper_wave_l", "f(u) <= l (1-u) with l finite", l,
                std::numeric_limits<double>::quiet_NaN(), std::isfinite(l) ? 1 : 0)};
}

namespace {

// Deterministic coarse sweep for eta (and kappa/zeta); best min-margin wins.
struct SweepPick {
  double eta = std::numeric_limits<double>::quiet_NaN();
  double second = std::numeric_limits<double>::quiet_NaN();  // kappa or zeta
  std::vector<ConditionEntry> entries;
  bool valid = false;
};

double min_margin(const std::vector<ConditionEntry>& es) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : es) m = std::min(m, e.rhs - e.lhs);
  return m;
}

SweepPick sweep_B(const ProblemSpec& spec) {
  SweepPick best;
  double Fp = 0.0;
  reaction_integrals(spec, &Fp, nullptr);
  const double eta_max = std::min(Fp, 1.0);
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 20; ++i) {
    const double eta = eta_max * i / 21.0;
    if (Fp < 1.0) {
      auto es = check_accaB(spec, eta, std::nullopt);
      const double m = min_margin(es);
      if (m > best_margin) best = {eta, std::numeric_limits<double>::quiet_NaN(), es, true};
      best_margin = std::max(best_margin, m);
    } else {
      for (int j = 1; j <= 10; ++j) {
        const double kappa = eta * j / 11.0;
        auto es = check_accaB(spec, eta, kappa);
        const double m = min_margin(es);
        if (m > best_margin) best = {eta, kappa, es, true};
        best_margin = std::max(best_margin, m);
      }
    }
  }
  return best;
}

SweepPick sweep_C(const ProblemSpec& spec) {
  SweepPick best;
  double Fp = 0.0, Fm = 0.0;
  reaction_integrals(spec, &Fp, &Fm);
  const double eta_max = std::min(Fp, 1.0) - Fm;
  if (eta_max <= 0.0) return best;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 20; ++i) {
    const double eta = eta_max * i / 21.0;
    if (Fp < 1.0) {
      auto es = check_accaC(spec, eta, std::nullopt);
      const double m = min_margin(es);
      if (m > best_margin) best = {eta, std::numeric_limits<double>::quiet_NaN(), es, true};
      best_margin = std::max(best_margin, m);
    } else {
      const double zeta_max = 1.0 - Fm - eta;
      for (int j = 1; j <= 10; ++j) {
        const double zeta = zeta_max * j / 11.0;
        auto es = check_accaC(spec, eta, zeta);
        const double m = min_margin(es);
        if (m > best_margin) best = {eta, zeta, es, true};
        best_margin = std::max(best_margin, m);
      }
    }
  }
  return best;
}

}  // namespace

ConditionReport build_report(const ProblemSpec& spec, const ReportParams& params) {
  ConditionReport rep;
  const ReactionClass cls = spec.cls;

  if (cls != ReactionClass::Zero) reaction_integrals(spec, &rep.F_plus, &rep.F_minus);

  if (cls == ReactionClass::A) {
    const double lo = lower_bound_A(spec), hi = upper_bound_A(spec);
    rep.entries.push_back(entry("stimalefinaleC", "2 eps sqrt(d(0)f'(0)) - h'(0) <= c* <= upper",
                                lo, hi, lo <= hi + 1e-12 ? 1 : 0));
  }

  if (cls == ReactionClass::B || cls == ReactionClass::C) {
    rep.entries.push_back(check_stimah(spec));
    for (auto& e : check_necessf(spec)) rep.entries.push_back(e);

    const bool necess_ok =
        cls == ReactionClass::B || rep.all_pass({"necessf_1", "necessf_2"});
    if (necess_ok) {
      try {
        double xi0 = std::numeric_limits<double>::quiet_NaN();
        std::vector<ConditionEntry> es;
        if (params.eta) {
          rep.eta = *params.eta;
          if (cls == ReactionClass::B) {
            if (params.kappa) rep.kappa = *params.kappa;
            es = check_accaB(spec, *params.eta, params.kappa, &xi0);
          } else {
            if (params.zeta) rep.zeta = *params.zeta;
            es = check_accaC(spec, *params.eta, params.zeta, &xi0);
          }
        } else {
          const SweepPick pick = cls == ReactionClass::B ? sweep_B(spec) : sweep_C(spec);
          if (pick.valid) {
            rep.heuristic_params = true;
            rep.eta = pick.eta;
            (cls == ReactionClass::B ? rep.kappa : rep.zeta) = pick.second;
            es = pick.entries;
            if (rep.F_plus >= 1.0) xi0 = solve_xi0(spec, 1.0 - pick.second);
          }
        }
        rep.xi0 = xi0;
        for (auto& e : es) rep.entries.push_back(e);
      } catch (const std::invalid_argument&) {
        // out-of-range parameters leave the sufficient-condition entries out
      }
    }

    const auto fi = fisher_interval(spec);
    rep.entries.push_back(
        entry("stimaconfisher", "-2 eps sqrt(d0 f'(u0)) - max h' <= c <= 2 eps sqrt(d1 f'(u0)) - min h'",
              fi.first, fi.second, -1));
    if (params.run_companion && necess_ok) {
      try {
        const auto si = speed_interval_estimate(spec, params.solver);
        rep.entries.push_back(
            entry("stimarozza", "c*_f - max h' <= c <= c*_f - min h'", si.first, si.second, -1));
      } catch (const std::exception&) {
        // companion solve may legitimately fail (no admissible speed for h==0)
      }
    }
  }

  if (cls == ReactionClass::Zero) {
    const BurgersResult inc = burgers_speed(spec, 0.0, 1.0);
    for (const auto& [id, ok] : inc.conditions) {
      rep.entries.push_back(entry(id, id, 0.0, 0.0, ok ? 1 : 0));
    }
  }

  for (auto& e : check_proper_wave(spec)) rep.entries.push_back(e);
  return rep;
}

std::string ConditionReport::to_json() const {
  nlohmann::ordered_json j;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json je;
    je["id"] = e.id;
    je["paper_eq"] = e.paper_eq;
    if (e.satisfied < 0) {
      je["satisfied"] = nullptr;
    } else {
      je["satisfied"] = e.satisfied == 1;
    }
    auto put = [&je](const char* key, double v) {
      if (std::isnan(v)) {
        je[key] = nullptr;
      } else if (std::isinf(v)) {
        je[key] = v > 0 ? "inf" : "-inf";
      } else {
        je[key] = v;
      }
    };
    put("lhs", e.lhs);
    put("rhs", e.rhs);
    if (e.caveat_density) je["caveat_density"] = true;
    j["entries"].push_back(je);
  }
  auto put_top = [&j](const char* key, double v) {
    if (!std::isnan(v)) j[key] = v;
  };
  put_top("F_plus", F_plus);
  put_top("F_minus", F_minus);
  put_top("eta", eta);
  put_top("kappa", kappa);
  put_top("zeta", zeta);
  put_top("xi0", xi0);
  if (heuristic_params) j["heuristic_params"] = true;
  return j.dump(2);
}

}  // namespace qfb
