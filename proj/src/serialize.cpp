#include "serialize.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>

#include <json.hpp>

namespace crowdtag {

using nlohmann::json;

namespace {

double require_number(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing key: ") + key);
  const auto& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("key is not a number: ") + key);
  return v.get<double>();
}

json knobs_json_obj(const MechanismDesign& d) {
  json k;
  k["eps"] = d.knobs.eps;
  k["eps_rule"] = d.knobs.eps_auto ? "auto" : "explicit";
  k["eps1"] = d.knobs.eps1;
  k["eps1_rule"] = d.knobs.eps1_midpoint ? "midpoint" : "explicit";
  k["eps2"] = d.knobs.eps2;
  k["eps2_rule"] = d.knobs.eps2_midpoint ? "midpoint" : "explicit";
  k["gamma_margin"] = d.knobs.gamma_margin;
  return k;
}

json params_json_obj(const SystemParams& p, const DesignTarget& t) {
  json j;
  j["alpha_R"] = p.alpha_R;
  j["alpha_F"] = p.alpha_F;
  j["mu_a"] = p.mu_a;
  j["p"] = p.p;
  j["a"] = p.a;
  j["b"] = p.b;
  j["c"] = p.c;
  j["C_e"] = p.C_e;
  j["Q_p"] = p.Q_p;
  j["Q_np"] = p.Q_np;
  j["theta"] = t.theta;
  j["delta"] = t.delta;
  return j;
}

}  // namespace

std::string params_digest(const SystemParams& p, const DesignTarget& t) {
  // FNV-1a over the raw little-endian doubles, in config-key order
  const double fields[] = {p.alpha_R, p.alpha_F, p.mu_a, p.p,  p.a,     p.b,
                           p.c,       p.C_e,     p.Q_p,  p.Q_np, t.theta, t.delta};
  uint64_t h = 0xcbf29ce484222325ull;
  for (double f : fields) {
    uint64_t bits;
    static_assert(sizeof bits == sizeof f);
    std::memcpy(&bits, &f, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::pair<SystemParams, DesignTarget> parse_config_json(
    const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config root must be a JSON object");

  static const char* kKeys[] = {"alpha_R", "alpha_F", "mu_a", "p",
                                "a",       "b",       "c",    "C_e",
                                "Q_p",     "Q_np",    "theta", "delta"};
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known |= (key == k);
    if (!known) throw ParseError("unknown config key: " + key);
  }

  SystemParams p;
  p.alpha_R = require_number(j, "alpha_R");
  p.alpha_F = require_number(j, "alpha_F");
  p.mu_a = require_number(j, "mu_a");
  p.p = require_number(j, "p");
  p.a = require_number(j, "a");
  p.b = require_number(j, "b");
  p.c = require_number(j, "c");
  p.C_e = require_number(j, "C_e");
  p.Q_p = require_number(j, "Q_p");
  p.Q_np = require_number(j, "Q_np");
  DesignTarget t;
  t.theta = require_number(j, "theta");
  t.delta = require_number(j, "delta");
  return {p, t};
}

std::string validation_report_json(const ValidationReport& report) {
  json j;
  j["ok"] = report.ok();
  j["violations"] = report.violations;
  return j.dump(2);
}

DesignKnobs parse_knobs_json(const std::string& text) {
  DesignKnobs knobs;
  if (text.empty()) return knobs;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("knobs are not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("knobs root must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "eps") {
      if (value.is_string() && value == "auto") continue;
      if (!value.is_number()) throw ParseError("knob eps must be a number or \"auto\"");
      knobs.eps = value.get<double>();
    } else if (key == "eps1") {
      if (value.is_string() && value == "midpoint") continue;
      if (!value.is_number()) throw ParseError("knob eps1 must be a number or \"midpoint\"");
      knobs.eps1 = value.get<double>();
    } else if (key == "eps2") {
      if (value.is_string() && value == "midpoint") continue;
      if (!value.is_number()) throw ParseError("knob eps2 must be a number or \"midpoint\"");
      knobs.eps2 = value.get<double>();
    } else if (key == "gamma_margin") {
      if (!value.is_number()) throw ParseError("knob gamma_margin must be a number");
      knobs.gamma_margin = value.get<double>();
    } else {
      throw ParseError("unknown knob key: " + key);
    }
  }
  return knobs;
}

std::string design_bundle_json(const MechanismDesign& d) {
  json j;
  j["params"] = params_json_obj(d.params, d.target);
  j["knobs"] = knobs_json_obj(d);
  j["theta_tilde"] = d.theta_tilde;
  j["w"] = d.w;
  j["eta"] = d.eta;
  j["gamma"] = d.gamma;
  j["R"] = d.R;
  json diag;
  diag["f_value"] = d.diag.f_value;
  diag["kappa"] = d.diag.kappa;
  diag["K_delta"] = d.diag.K_delta;
  if (d.diag.theta_2)
    diag["theta_2"] = *d.diag.theta_2;
  else
    diag["theta_2"] = nullptr;
  diag["theta_star"] = d.diag.theta_star;
  diag["w_interval"] = {d.diag.w_lo, d.diag.w_hi};
  diag["cw_alpha_R"] = d.diag.cw_alpha_R;
  diag["eta_bar"] = d.diag.eta_bar;
  diag["eta_star_tilde"] = d.diag.eta_star_tilde;
  diag["gamma_lower"] = d.diag.gamma_lower;
  j["diagnostics"] = diag;
  j["params_digest"] = params_digest(d.params, d.target);
  return j.dump(2);
}

MechanismDesign parse_design_bundle_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("design bundle is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("params") || !j.contains("diagnostics"))
    throw ParseError("design bundle must contain params and diagnostics");

  MechanismDesign d;
  std::tie(d.params, d.target) = parse_config_json(j.at("params").dump());
  d.theta_tilde = require_number(j, "theta_tilde");
  d.w = require_number(j, "w");
  d.eta = require_number(j, "eta");
  d.gamma = require_number(j, "gamma");
  d.R = require_number(j, "R");
  const json& diag = j.at("diagnostics");
  d.diag.f_value = require_number(diag, "f_value");
  d.diag.kappa = require_number(diag, "kappa");
  d.diag.K_delta = require_number(diag, "K_delta");
  if (diag.contains("theta_2") && diag.at("theta_2").is_number())
    d.diag.theta_2 = diag.at("theta_2").get<double>();
  d.diag.theta_star = require_number(diag, "theta_star");
  if (!diag.contains("w_interval") || !diag.at("w_interval").is_array() ||
      diag.at("w_interval").size() != 2)
    throw ParseError("diagnostics.w_interval must be [lo, hi]");
  d.diag.w_lo = diag.at("w_interval")[0].get<double>();
  d.diag.w_hi = diag.at("w_interval")[1].get<double>();
  d.diag.cw_alpha_R = require_number(diag, "cw_alpha_R");
  d.diag.eta_bar = require_number(diag, "eta_bar");
  d.diag.eta_star_tilde = require_number(diag, "eta_star_tilde");
  d.diag.gamma_lower = require_number(diag, "gamma_lower");

  if (j.contains("knobs")) {
    const json& k = j.at("knobs");
    d.knobs.eps = require_number(k, "eps");
    d.knobs.eps1 = require_number(k, "eps1");
    d.knobs.eps2 = require_number(k, "eps2");
    d.knobs.gamma_margin = require_number(k, "gamma_margin");
    d.knobs.eps_auto = k.value("eps_rule", "auto") == std::string("auto");
    d.knobs.eps1_midpoint = k.value("eps1_rule", "midpoint") == std::string("midpoint");
    d.knobs.eps2_midpoint = k.value("eps2_rule", "midpoint") == std::string("midpoint");
  }

  if (j.contains("params_digest") &&
      j.at("params_digest").get<std::string>() !=
          params_digest(d.params, d.target))
    throw ParseError("design bundle digest does not match its parameter block");
  return d;
}

std::string ne_report_json(const NeReport& rep, const MechanismDesign& design) {
  json j;
  j["x_eta"] = rep.x_eta;
  j["second_ne_exists"] = rep.second_ne_exists;
  if (rep.degradation_P)
    j["degradation_P"] = *rep.degradation_P;
  else
    j["degradation_P"] = nullptr;
  json list = json::array();
  for (const NeProfile& prof : rep.ne_list) {
    json e;
    e["mu"] = {prof.mu.mu0, prof.mu.mu1, prof.mu.mu2};
    e["classification"] = prof.classification == NeClass::AI ? "AI" : "NonAI";
    e["success_prob"] = prof.success_prob;
    e["utilities"] = {prof.utilities[0], prof.utilities[1], prof.utilities[2]};
    e["beta_F"] = prof.beta_F;
    e["beta_R"] = prof.beta_R;
    list.push_back(e);
  }
  j["ne_list"] = list;
  j["flags"] = {{"second_ne_criteria_disagree", rep.second_ne_criteria_disagree}};
  j["params_digest"] = params_digest(design.params, design.target);
  return j.dump(2);
}

std::string attractor_json(const AttractorResult& r) {
  json j;
  j["beta_star"] = r.beta_star;
  j["regime"] = r.regime == Regime::Saturated ? "saturated" : "interior";
  j["rho_bar"] = r.rho_bar;
  j["rho"] = r.rho;
  return j.dump(2);
}

}  // namespace crowdtag
