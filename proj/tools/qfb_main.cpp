#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfb/bounds.hpp"
#include "qfb/burgers.hpp"
#include "qfb/config.hpp"
#include "qfb/integrate.hpp"
#include "qfb/model.hpp"
#include "qfb/profile.hpp"
#include "qfb/speed.hpp"

namespace {

using namespace qfb;

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::string method;
  double step = 0.0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "problem config (JSON)")->required();
  cmd->add_option("--out", args.out_path, "output file (default: stdout)");
  cmd->add_option("--format", args.format, "csv|json");
  cmd->add_option("--method", args.method, "rk4|euler");
  cmd->add_option("--step", args.step, "integration step in w");
}

Config load_with_overrides(const CommonArgs& args) {
  Config cfg = Config::load(args.config_path);
  if (!args.format.empty()) {
    if (args.format != "csv" && args.format != "json")
      throw ConfigError("--format must be csv or json");
    cfg.output_format = args.format;
  }
  if (!args.out_path.empty()) cfg.output_path = args.out_path;
  if (!args.method.empty())
    cfg.solver.integ.method =
        args.method == "euler" ? IntegrationMethod::Euler : IntegrationMethod::RK4;
  if (args.step > 0.0) cfg.solver.integ.step = args.step;
  return cfg;
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(cfg.output_path);
  if (!out) throw ConfigError("cannot open output file '" + cfg.output_path + "'");
  out << text;
}

std::string fmt6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int report_speed(const Config& cfg, const SpeedResult& res) {
  switch (res.kind) {
    case SpeedKind::HalfLine:
      std::cout << "HalfLine c* = " << fmt6(res.c_star) << "  (admissible speeds: c >= c*)\n";
      break;
    case SpeedKind::Unique:
      std::cout << "Unique c* = " << fmt6(res.c_star) << "\n";
      break;
    case SpeedKind::NotFound:
      std::cout << "NotFound: " << res.reason;
      if (res.both_blow_up) std::cout << " (forward and backward solutions both blow up to 1)";
      if (res.backward_evidence)
        std::cout << "; backward run at c=" << fmt6(res.evidence_c) << ": "
                  << to_string(*res.backward_evidence);
      std::cout << "\n";
      break;
  }
  std::cout << "bracket [" << fmt6(res.bracket_used.first) << ", " << fmt6(res.bracket_used.second)
            << "], probes " << res.iterations;
  if (std::isfinite(res.residual)) std::cout << ", residual " << fmt6(res.residual);
  std::cout << "\n";
  emit(cfg, speed_result_json(res));
  return res.found() ? 0 : 3;
}

int cmd_speed(const CommonArgs& args) {
  const Config cfg = load_with_overrides(args);
  const ProblemSpec spec = cfg.to_problem_spec();
  const ReducedProblem rp(spec);
  std::cout << "reaction class " << to_string(spec.cls);
  if (spec.cls == ReactionClass::B || spec.cls == ReactionClass::C)
    std::cout << ", u0 = " << fmt6(spec.u0);
  std::cout << ", D1 = " << fmt6(spec.D1) << ", epsilon = " << fmt6(spec.epsilon) << "\n";
  return report_speed(cfg, find_speed(rp, cfg.solver));
}

int cmd_check(const CommonArgs& args) {
  const Config cfg = load_with_overrides(args);
  const ProblemSpec spec = cfg.to_problem_spec();
  ReportParams params;
  params.eta = cfg.eta;
  params.kappa = cfg.kappa;
  params.zeta = cfg.zeta;
  params.solver = cfg.solver;
  const ConditionReport rep = build_report(spec, params);

  std::printf("%-16s %-8s %12s %12s  %s\n", "id", "status", "lhs", "rhs", "condition");
  for (const auto& e : rep.entries) {
    const char* status = e.satisfied < 0 ? "n/a" : (e.satisfied == 1 ? "PASS" : "FAIL");
    std::printf("%-16s %-8s %12s %12s  %s%s\n", e.id.c_str(), status, fmt6(e.lhs).c_str(),
                fmt6(e.rhs).c_str(), e.paper_eq.c_str(),
                e.caveat_density ? " [stated for constant d]" : "");
  }
  if (!std::isnan(rep.F_plus))
    std::cout << "F+ = " << fmt6(rep.F_plus) << ", F- = " << fmt6(rep.F_minus) << "\n";
  if (!std::isnan(rep.eta)) {
    std::cout << "eta = " << fmt6(rep.eta);
    if (!std::isnan(rep.kappa)) std::cout << ", kappa = " << fmt6(rep.kappa);
    if (!std::isnan(rep.zeta)) std::cout << ", zeta = " << fmt6(rep.zeta);
    if (!std::isnan(rep.xi0)) std::cout << ", xi0 = " << fmt6(rep.xi0);
    if (rep.heuristic_params) std::cout << "  (picked by sweep)";
    std::cout << "\n";
  }
  emit(cfg, rep.to_json());
  return 0;
}

int cmd_trajectory(const CommonArgs& args, double c, bool c_given) {
  Config cfg = load_with_overrides(args);
  const ProblemSpec spec = cfg.to_problem_spec();
  const ReducedProblem rp(spec);
  if (!c_given) {
    const SpeedResult res = find_speed(rp, cfg.solver);
    if (!res.found()) {
      std::cerr << "no admissible speed found (" << res.reason << "); pass --c explicitly\n";
      return 3;
    }
    c = res.c_star;
  }
  std::ostringstream os;
  const Trajectory fwd = forward_solution(rp, c, rp.D1(), cfg.solver.integ);
  dump_trajectory_csv(fwd, rp, os);
  Trajectory bwd;
  try {
    bwd = backward_solution(rp, c, 0.0, cfg.solver.integ);
    dump_trajectory_csv(bwd, rp, os);
  } catch (const IntegrationFault& e) {
    os << "# backward integration fault: " << e.what() << "\n";
  }
  if (spec.cls == ReactionClass::Zero) {
    os << "# closed-form column: w,y_closed\n";
    const BurgersResult b = burgers_speed(spec, 0.0, 1.0);
    if (b.admissible) {
      const long n = std::lround(rp.D1() / cfg.solver.integ.step);
      char buf[64];
      for (long i = 0; i <= n; ++i) {
        const double w = rp.D1() * i / n;
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g\n", w, b.profile_closed_form(w));
        os << buf;
      }
    }
  }
  if (spec.cls == ReactionClass::B || spec.cls == ReactionClass::C) {
    const ProbeRecord rec = mismatch_BC(rp, c, cfg.solver);
    os << "# mismatch at w0=" << fmt6(rp.w0()) << ": M(c)="
       << (rec.defined ? fmt6(rec.mismatch) : std::string("undefined")) << "\n";
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_profile(const CommonArgs& args, double c, bool c_given) {
  Config cfg = load_with_overrides(args);
  const ProblemSpec spec = cfg.to_problem_spec();
  const ReducedProblem rp(spec);
  if (!c_given) {
    const SpeedResult res = find_speed(rp, cfg.solver);
    if (!res.found()) {
      std::cerr << "no admissible speed found (" << res.reason << ")\n";
      return 3;
    }
    c = res.c_star;
  }
  const num::Pchip y = matched_connection(rp, c, cfg.solver.integ);
  const WaveProfile p = reconstruct_wave(rp, c, y);
  std::ostringstream os;
  dump_profile_csv(p, os);
  emit(cfg, os.str());
  std::cout << "profile: c = " << fmt6(c) << ", residual_sup = " << fmt6(p.residual_sup)
            << ", max v' = " << fmt6(p.max_slope) << "\n";
  return 0;
}

int cmd_epsilon(const CommonArgs& args, const std::string& eps_list) {
  Config cfg = load_with_overrides(args);
  const ProblemSpec spec = cfg.to_problem_spec();
  std::vector<double> eps;
  std::stringstream ss(eps_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) eps.push_back(std::stod(item));
  }
  if (eps.empty()) throw ConfigError("--eps needs a comma-separated list of viscosities");
  const auto rows = epsilon_scan(spec, eps, cfg.solver);
  std::ostringstream os;
  dump_epsilon_csv(rows, os);
  emit(cfg, os.str());
  return 0;
}

int cmd_burgers(const CommonArgs& args, double u_minus, double u_plus) {
  Config cfg = load_with_overrides(args);
  const ProblemSpec spec = cfg.to_problem_spec();
  const BurgersResult res = burgers_speed(spec, u_minus, u_plus);
  std::cout << "c = " << fmt6(res.speed) << " for the {" << fmt6(u_minus) << ", " << fmt6(u_plus)
            << "}-connection\n";
  if (res.admissible) {
    std::cout << "admissible, " << to_string(*res.direction) << "\n";
  } else {
    std::cout << "not admissible: ";
    for (const auto& [id, ok] : res.conditions) std::cout << id << (ok ? " holds " : " fails ");
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Admissible speeds of monotone heteroclinic fronts for the quasilinear "
               "Fisher-Burgers equation with saturating density-dependent diffusion"};
  app.require_subcommand(1);

  CommonArgs args;
  double c_value = 0.0;
  std::string eps_list;
  double u_minus = 1.0, u_plus = 0.0;

  auto* speed = app.add_subcommand("speed", "critical / unique admissible speed");
  add_common(speed, args);

  auto* check = app.add_subcommand("check", "evaluate the analytic bounds and conditions");
  add_common(check, args);

  auto* traj = app.add_subcommand("trajectory", "dump forward and backward trajectories (CSV)");
  add_common(traj, args);
  auto* traj_c = traj->add_option("--c", c_value, "speed to shoot at (default: solve first)");

  auto* prof = app.add_subcommand("profile", "reconstruct the traveling-wave profile (CSV)");
  add_common(prof, args);
  auto* prof_c = prof->add_option("--c", c_value, "speed (default: the computed c*)");

  auto* epss = app.add_subcommand("epsilon", "viscosity scan (CSV)");
  add_common(epss, args);
  epss->add_option("--eps", eps_list, "comma-separated viscosities, e.g. 0.25,0.5,1")->required();

  auto* burg = app.add_subcommand("burgers", "zero-reaction connection between two states");
  add_common(burg, args);
  burg->add_option("--u-minus", u_minus, "left state (t -> -inf)")->required();
  burg->add_option("--u-plus", u_plus, "right state (t -> +inf)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (speed->parsed()) return cmd_speed(args);
    if (check->parsed()) return cmd_check(args);
    if (traj->parsed()) return cmd_trajectory(args, c_value, traj_c->count() > 0);
    if (prof->parsed()) return cmd_profile(args, c_value, prof_c->count() > 0);
    if (epss->parsed()) return cmd_epsilon(args, eps_list);
    if (burg->parsed()) return cmd_burgers(args, u_minus, u_plus);
  } catch (const qfb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const qfb::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const qfb::HypothesisError& e) {
    std::cerr << "hypothesis violation " << e.what() << "\n";
    return 2;
  } catch (const qfb::UnclassifiableReaction& e) {
    std::cerr << "hypothesis violation (F): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
