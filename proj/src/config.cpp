#include "qfb/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qfb {

namespace {

using nlohmann::ordered_json;

IntegrationMethod method_from_string(const std::string& s) {
  if (s == "rk4") return IntegrationMethod::RK4;
  if (s == "euler") return IntegrationMethod::Euler;
  throw ConfigError("solver.method must be 'rk4' or 'euler', got '" + s + "'");
}

}  // namespace

Config Config::from_json_text(const std::string& text, const std::string& origin) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  Config c;
  try {
    if (!j.contains("f")) throw ConfigError(origin + ": missing required field 'f'");
    c.f = j.at("f").get<std::string>();
    c.h = j.value("h", c.h);
    c.D = j.value("D", c.D);
    c.epsilon = j.value("epsilon", c.epsilon);
    if (j.contains("class_override"))
      c.class_override = reaction_class_from_string(j.at("class_override").get<std::string>());
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      c.solver.integ.step = s.value("step", c.solver.integ.step);
      c.solver.tol_c = s.value("tol_c", c.solver.tol_c);
      c.solver.tol_match = s.value("tol_match", c.solver.tol_match);
      if (s.contains("method"))
        c.solver.integ.method = method_from_string(s.at("method").get<std::string>());
    }
    if (j.contains("bracket_override")) {
      const auto& b = j.at("bracket_override");
      if (!b.is_array() || b.size() != 2)
        throw ConfigError(origin + ": bracket_override must be [lo, hi]");
      c.solver.bracket_override = {b[0].get<double>(), b[1].get<double>()};
    }
    if (j.contains("eta")) c.eta = j.at("eta").get<double>();
    if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
    if (j.contains("zeta")) c.zeta = j.at("zeta").get<double>();
    if (j.contains("output")) {
      const auto& o = j.at("output");
      c.output_format = o.value("format", c.output_format);
      c.output_path = o.value("path", c.output_path);
      if (c.output_format != "csv" && c.output_format != "json")
        throw ConfigError(origin + ": output.format must be 'csv' or 'json'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!(c.solver.integ.step > 0.0)) throw ConfigError(origin + ": solver.step must be positive");
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), path);
}

ProblemSpec Config::to_problem_spec() const {
  try {
    return ProblemSpec::make(f, h, D, epsilon, class_override);
  } catch (const ParseError& e) {
    throw ConfigError(std::string("expression error: ") + e.what());
  }
}

std::string speed_result_json(const SpeedResult& r) {
  ordered_json j;
  switch (r.kind) {
    case SpeedKind::HalfLine: j["kind"] = "HalfLine"; break;
    case SpeedKind::Unique: j["kind"] = "Unique"; break;
    case SpeedKind::NotFound: j["kind"] = "NotFound"; break;
  }
  auto put = [](ordered_json& o, const char* key, double v) {
    if (std::isnan(v)) {
      o[key] = nullptr;
    } else if (std::isinf(v)) {
      o[key] = v > 0 ? "inf" : "-inf";
    } else {
      o[key] = v;
    }
  };
  put(j, "c_star", r.c_star);
  put(j, "residual", r.residual);
  j["iterations"] = r.iterations;
  j["bracket"] = {r.bracket_used.first, r.bracket_used.second};
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (r.both_blow_up) j["both_blow_up"] = true;
  if (r.backward_evidence) {
    j["backward_evidence"] = to_string(*r.backward_evidence);
    j["evidence_c"] = r.evidence_c;
  }
  j["probes"] = ordered_json::array();
  for (const auto& p : r.probes) {
    ordered_json jp;
    put(jp, "c", p.c);
    put(jp, "mismatch", p.mismatch);
    jp["sign"] = p.sign;
    if (p.trivial_forward) jp["trivial_forward"] = true;
    jp["forward"] = to_string(Termination{p.forward, 0.0, false});
    jp["backward"] = to_string(Termination{p.backward, 0.0, false});
    j["probes"].push_back(jp);
  }
  return j.dump(2);
}

}  // namespace qfb
