// extern-C bridge: opaque handles over the C++ core, exceptions mapped to
// status codes, all strings heap-owned by the caller.
#include "crowdtag/crowdtag.h"

#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "equilibrium.hpp"
#include "experiments.hpp"
#include "mechanism.hpp"
#include "serialize.hpp"
#include "tagging_sim.hpp"
#include "version.hpp"

using namespace crowdtag;

struct ct_model {
  SystemParams params;
  DesignTarget target;
};

struct ct_design {
  MechanismDesign design;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_msg(char** slot, const std::string& msg) {
  if (slot) *slot = dup_string(msg);
}

template <typename Fn>
ct_status guarded(char** errmsg, Fn&& fn) {
  if (errmsg) *errmsg = nullptr;
  try {
    return fn();
  } catch (const ParseError& e) {
    set_msg(errmsg, e.what());
    return CT_PARSE_ERROR;
  } catch (const std::invalid_argument& e) {
    set_msg(errmsg, e.what());
    return CT_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    set_msg(errmsg, e.what());
    return CT_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_msg(errmsg, e.what());
    return CT_ERROR;
  } catch (...) {
    set_msg(errmsg, "unknown error");
    return CT_ERROR;
  }
}

PostType parse_post(char post) {
  if (post == 'F' || post == 'f') return PostType::Fake;
  if (post == 'R' || post == 'r') return PostType::Real;
  throw std::invalid_argument("post must be 'F' or 'R'");
}

}  // namespace

extern "C" {

const char* ct_version(void) { return kVersion; }

void ct_string_free(char* s) { delete[] s; }

ct_status ct_model_parse_json(const char* text, ct_model** out, char** errmsg) {
  if (!text || !out) {
    set_msg(errmsg, "null argument");
    return CT_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errmsg, [&]() -> ct_status {
    auto [params, target] = parse_config_json(text);
    const ValidationReport report = validate_system(params, target);
    if (!report.ok()) {
      set_msg(errmsg, validation_report_json(report));
      return CT_VALIDATION_FAILED;
    }
    *out = new ct_model{params, target};
    return CT_OK;
  });
}

void ct_model_free(ct_model* m) { delete m; }

ct_status ct_model_validation_report(const ct_model* m, char** out) {
  if (!m || !out) return CT_INVALID_ARGUMENT;
  return guarded(nullptr, [&]() -> ct_status {
    *out = dup_string(
        validation_report_json(validate_system(m->params, m->target)));
    return *out ? CT_OK : CT_ERROR;
  });
}

ct_status ct_design_run(const ct_model* m, const char* knobs_json,
                        ct_design** out, char** errmsg) {
  if (!m || !out) {
    set_msg(errmsg, "null argument");
    return CT_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errmsg, [&]() -> ct_status {
    const DesignKnobs knobs =
        parse_knobs_json(knobs_json ? knobs_json : "");
    DesignOutcome outcome = choose_design(m->target, m->params, knobs);
    if (!designable(outcome)) {
      const NotDesignable& nd = std::get<NotDesignable>(outcome);
      set_msg(errmsg, std::string(reason_code(nd.reason)) + ": " + nd.detail);
      return CT_NOT_DESIGNABLE;
    }
    *out = new ct_design{std::get<MechanismDesign>(std::move(outcome))};
    return CT_OK;
  });
}

ct_status ct_design_to_json(const ct_design* d, char** out) {
  if (!d || !out) return CT_INVALID_ARGUMENT;
  return guarded(nullptr, [&]() -> ct_status {
    *out = dup_string(design_bundle_json(d->design));
    return *out ? CT_OK : CT_ERROR;
  });
}

ct_status ct_design_parse_json(const char* text, ct_design** out,
                               char** errmsg) {
  if (!text || !out) {
    set_msg(errmsg, "null argument");
    return CT_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded(errmsg, [&]() -> ct_status {
    *out = new ct_design{parse_design_bundle_json(text)};
    return CT_OK;
  });
}

void ct_design_free(ct_design* d) { delete d; }

ct_status ct_attractor_report(const ct_design* d, char post, double mu0,
                              double mu1, double mu2, char** out,
                              char** errmsg) {
  if (!d || !out) {
    set_msg(errmsg, "null argument");
    return CT_INVALID_ARGUMENT;
  }
  return guarded(errmsg, [&]() -> ct_status {
    const PostType u = parse_post(post);
    const PopulationProfile mu{mu0, mu1, mu2};
    const ParticipantFractions fr =
        participant_fractions(mu, d->design.params.mu_a);
    const AttractorResult res =
        attractor_closed_form(u, fr, d->design.params, d->design.w);
    *out = dup_string(attractor_json(res));
    return *out ? CT_OK : CT_ERROR;
  });
}

ct_status ct_simulate_csv(const ct_design* d, char post, double mu0,
                          double mu1, double mu2, long long epochs,
                          uint64_t seed, char** out, char** errmsg) {
  if (!d || !out) {
    set_msg(errmsg, "null argument");
    return CT_INVALID_ARGUMENT;
  }
  return guarded(errmsg, [&]() -> ct_status {
    const PostType u = parse_post(post);
    PopulationProfile mu{mu0, mu1, mu2};
    if (mu0 < 0.0 && mu1 < 0.0 && mu2 < 0.0)
      mu = profile_x(d->design.eta, d->design.params.mu_a);
    const ParticipantFractions fr =
        participant_fractions(mu, d->design.params.mu_a);
    const TagTrajectory traj =
        simulate(u, fr, d->design.params, d->design.w, epochs, seed);
    *out = dup_string(trajectory_csv(traj));
    return *out ? CT_OK : CT_ERROR;
  });
}

ct_status ct_verify_ne(const ct_design* d, double grid_step, char** out,
                       char** errmsg) {
  if (!d || !out) {
    set_msg(errmsg, "null argument");
    return CT_INVALID_ARGUMENT;
  }
  return guarded(errmsg, [&]() -> ct_status {
    const NeReport rep = ne_set(d->design, d->design.params);
    std::string text = ne_report_json(rep, d->design);
    if (grid_step > 0.0) {
      const auto candidates =
          ne_grid_scan(d->design, d->design.params, grid_step);
      // splice the candidate list into the report object
      nlohmann::json j = nlohmann::json::parse(text);
      nlohmann::json arr = nlohmann::json::array();
      for (const PopulationProfile& mu : candidates)
        arr.push_back({mu.mu0, mu.mu1, mu.mu2});
      j["grid_step"] = grid_step;
      j["grid_candidates"] = arr;
      text = j.dump(2);
    }
    *out = dup_string(text);
    return *out ? CT_OK : CT_ERROR;
  });
}

ct_status ct_sweep_csv(double theta, const double* d_values, int n_d,
                       int n_samples, uint64_t master_seed,
                       const char* knobs_json, char** out, char** summary_json,
                       char** errmsg) {
  if (!d_values || n_d < 1 || !out) {
    set_msg(errmsg, "null argument");
    return CT_INVALID_ARGUMENT;
  }
  return guarded(errmsg, [&]() -> ct_status {
    SweepSpec spec;
    spec.d_values.assign(d_values, d_values + n_d);
    spec.n_samples = n_samples;
    spec.master_seed = master_seed;
    spec.theta = theta;
    spec.knobs = parse_knobs_json(knobs_json ? knobs_json : "");
    const SweepSummary summary = run_sweep(spec);
    *out = dup_string(sweep_csv(summary));
    if (summary_json) {
      nlohmann::json j;
      j["master_seed"] = summary.master_seed;
      j["theta"] = summary.theta;
      j["P_convention"] =
          "no second NE counts as P = 0; fractions over designable samples";
      nlohmann::json kj;
      kj["eps"] = summary.knob_provenance.eps;
      kj["eps_rule"] = summary.knob_provenance.eps_auto ? "auto" : "explicit";
      kj["eps1"] = summary.knob_provenance.eps1;
      kj["eps2"] = summary.knob_provenance.eps2;
      kj["gamma_margin"] = summary.knob_provenance.gamma_margin;
      j["knobs"] = kj;
      nlohmann::json rows = nlohmann::json::array();
      for (const SweepRow& r : summary.rows) {
        nlohmann::json rj;
        rj["d"] = r.d;
        rj["n"] = r.n;
        rj["frac_designable"] = r.frac_designable;
        rj["frac_R_AI"] = r.frac_R_AI;
        rj["frac_P_lt_10"] = r.frac_P_lt_10;
        rj["mean_P"] = r.mean_P;
        rj["n_second_ne"] = r.n_second_ne;
        rj["n_failed"] = r.n_failed;
        rows.push_back(rj);
      }
      j["rows"] = rows;
      *summary_json = dup_string(j.dump(2));
    }
    return *out ? CT_OK : CT_ERROR;
  });
}

}  // extern "C"
