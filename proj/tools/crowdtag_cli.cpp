// crowdtag command line: design / attractor / simulate / verify-ne / sweep.
// Talks to the core exclusively through the C API in crowdtag/crowdtag.h.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crowdtag/crowdtag.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNotDesignable = 3;

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { ct_string_free(ptr); }
  std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

int status_to_exit(ct_status st) {
  switch (st) {
    case CT_OK:
      return kExitOk;
    case CT_NOT_DESIGNABLE:
      return kExitNotDesignable;
    case CT_VALIDATION_FAILED:
    case CT_PARSE_ERROR:
    case CT_INVALID_ARGUMENT:
      return kExitValidation;
    default:
      return kExitInternal;
  }
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

// knob flags accept a number, or "auto" (eps) / "midpoint" (eps1, eps2)
struct KnobFlags {
  std::string eps, eps1, eps2;
  double gamma_margin = -1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--eps", eps, "theta-tilde inflation (number or 'auto')");
    cmd->add_option("--eps1", eps1,
                    "position of c*w*alpha_R in its interval (number or 'midpoint')");
    cmd->add_option("--eps2", eps2,
                    "eta offset above eta_bar (number or 'midpoint')");
    cmd->add_option("--gamma-margin", gamma_margin,
                    "gamma = (1 + margin) * gamma_lower");
  }

  std::string to_json() const {
    nlohmann::json j = nlohmann::json::object();
    auto put = [&j](const char* key, const std::string& v) {
      if (v.empty()) return;
      try {
        j[key] = std::stod(v);
      } catch (...) {
        j[key] = v;  // "auto" / "midpoint"; the library validates
      }
    };
    put("eps", eps);
    put("eps1", eps1);
    put("eps2", eps2);
    if (gamma_margin >= 0.0) j["gamma_margin"] = gamma_margin;
    return j.empty() ? std::string() : j.dump();
  }
};

void write_manifest(const std::string& subcommand, const std::string& out_path,
                    const std::string& config_path,
                    const std::string& design_json,
                    const nlohmann::json& extra) {
  nlohmann::json m;
  m["tool"] = "crowdtag";
  m["version"] = ct_version();
  m["subcommand"] = subcommand;
  m["config_path"] = config_path;
  m["rng"] = "splitmix64";
  m["outputs"] = {out_path};
  if (!design_json.empty()) {
    const nlohmann::json d = nlohmann::json::parse(design_json);
    m["params"] = d.at("params");
    m["knobs"] = d.at("knobs");
    m["params_digest"] = d.value("params_digest", "");
  }
  for (const auto& [k, v] : extra.items()) m[k] = v;
  const std::string path = out_path + ".manifest.json";
  if (!write_file(path, m.dump(2) + "\n"))
    std::cerr << "warning: could not write manifest " << path << "\n";
}

// loads config, runs the design pipeline (or loads a bundle), returns exit
// code; on success fills design handle + its JSON
int obtain_design(const std::string& config_path,
                  const std::string& design_path, const KnobFlags& knobs,
                  ct_design** design, std::string* design_json) {
  if (!design_path.empty()) {
    const auto text = read_file(design_path);
    if (!text) {
      std::cerr << "error: cannot read design bundle " << design_path << "\n";
      return kExitValidation;
    }
    OwnedString err;
    const ct_status st = ct_design_parse_json(text->c_str(), design, &err.ptr);
    if (st != CT_OK) {
      std::cerr << "error: " << err.str() << "\n";
      return status_to_exit(st);
    }
    *design_json = *text;
    return kExitOk;
  }

  const auto text = read_file(config_path);
  if (!text) {
    std::cerr << "error: cannot read config " << config_path << "\n";
    return kExitValidation;
  }
  ct_model* model = nullptr;
  OwnedString err;
  ct_status st = ct_model_parse_json(text->c_str(), &model, &err.ptr);
  if (st != CT_OK) {
    std::cerr << (st == CT_VALIDATION_FAILED ? err.str()
                                             : "error: " + err.str())
              << "\n";
    return status_to_exit(st);
  }
  const std::string knobs_json = knobs.to_json();
  OwnedString err2;
  st = ct_design_run(model, knobs_json.empty() ? nullptr : knobs_json.c_str(),
                     design, &err2.ptr);
  ct_model_free(model);
  if (st != CT_OK) {
    std::cerr << "error: " << err2.str() << "\n";
    return status_to_exit(st);
  }
  OwnedString bundle;
  if (ct_design_to_json(*design, &bundle.ptr) != CT_OK) {
    std::cerr << "error: could not serialize design\n";
    return kExitInternal;
  }
  *design_json = bundle.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"participation-game design and analysis for crowd-sourced "
               "fake-post tagging"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ct_version());

  // --- design ---------------------------------------------------------
  auto* cmd_design = app.add_subcommand("design", "compute the incentive design");
  std::string d_config, d_out;
  KnobFlags d_knobs;
  cmd_design->add_option("--config", d_config, "model config (JSON)")->required();
  cmd_design->add_option("--out", d_out, "output design bundle path")->required();
  d_knobs.attach(cmd_design);

  // --- attractor ------------------------------------------------------
  auto* cmd_attr = app.add_subcommand(
      "attractor", "limiting fraction of fake tags at a population profile");
  std::string a_config, a_design, a_post;
  double a_mu0 = 0.0, a_mu1 = 0.0, a_mu2 = 0.0;
  KnobFlags a_knobs;
  cmd_attr->add_option("--config", a_config, "model config (JSON)");
  cmd_attr->add_option("--design", a_design, "design bundle (skips the pipeline)");
  cmd_attr->add_option("--post", a_post, "post type: F or R")->required();
  cmd_attr->add_option("--mu0", a_mu0, "abstainer fraction")->required();
  cmd_attr->add_option("--mu1", a_mu1, "capacity-only fraction")->required();
  cmd_attr->add_option("--mu2", a_mu2, "warning-user fraction")->required();
  a_knobs.attach(cmd_attr);

  // --- simulate -------------------------------------------------------
  auto* cmd_sim = app.add_subcommand("simulate", "stochastic tagging dynamics");
  std::string s_config, s_design, s_post, s_out;
  long long s_epochs = 0;
  uint64_t s_seed = 0;
  double s_mu0 = -1.0, s_mu1 = -1.0, s_mu2 = -1.0;
  KnobFlags s_knobs;
  cmd_sim->add_option("--config", s_config, "model config (JSON)");
  cmd_sim->add_option("--design", s_design, "design bundle (skips the pipeline)");
  cmd_sim->add_option("--post", s_post, "post type: F or R")->required();
  cmd_sim->add_option("--epochs", s_epochs, "number of taggers")->required();
  cmd_sim->add_option("--seed", s_seed, "RNG seed (required)")->required();
  cmd_sim->add_option("--out", s_out, "trajectory CSV path")->required();
  cmd_sim->add_option("--mu0", s_mu0, "profile override (default: equilibrium)");
  cmd_sim->add_option("--mu1", s_mu1, "profile override");
  cmd_sim->add_option("--mu2", s_mu2, "profile override");
  s_knobs.attach(cmd_sim);

  // --- verify-ne ------------------------------------------------------
  auto* cmd_ne = app.add_subcommand("verify-ne", "equilibrium set and metrics");
  std::string n_design, n_out;
  double n_grid = 0.0;
  cmd_ne->add_option("--design", n_design, "design bundle")->required();
  cmd_ne->add_option("--grid-step", n_grid,
                     "best-response scan over the simplex at this step");
  cmd_ne->add_option("--out", n_out, "write report here instead of stdout");

  // --- sweep ----------------------------------------------------------
  auto* cmd_sweep = app.add_subcommand("sweep", "Monte-Carlo feasibility study");
  double w_theta = 0.75;
  std::vector<double> w_d;
  int w_n = 0;
  uint64_t w_seed = 0;
  std::string w_out;
  KnobFlags w_knobs;
  cmd_sweep->add_option("--theta", w_theta, "detection target")->required();
  cmd_sweep->add_option("--d", w_d, "capacity gaps (comma separated)")
      ->required()
      ->delimiter(',');
  cmd_sweep->add_option("--n", w_n, "samples per gap")->required();
  cmd_sweep->add_option("--seed", w_seed, "master seed (required)")->required();
  cmd_sweep->add_option("--out", w_out, "summary CSV path")->required();
  w_knobs.attach(cmd_sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (cmd_design->parsed()) {
    ct_design* design = nullptr;
    std::string bundle;
    const int rc = obtain_design(d_config, "", d_knobs, &design, &bundle);
    if (rc != kExitOk) return rc;
    if (!write_file(d_out, bundle + "\n")) {
      std::cerr << "error: cannot write " << d_out << "\n";
      ct_design_free(design);
      return kExitInternal;
    }
    write_manifest("design", d_out, d_config, bundle, {});
    ct_design_free(design);
    return kExitOk;
  }

  if (cmd_attr->parsed()) {
    if (a_config.empty() && a_design.empty()) {
      std::cerr << "error: attractor needs --config or --design\n";
      return kExitValidation;
    }
    ct_design* design = nullptr;
    std::string bundle;
    const int rc = obtain_design(a_config, a_design, a_knobs, &design, &bundle);
    if (rc != kExitOk) return rc;
    OwnedString out, err;
    const ct_status st = ct_attractor_report(design, a_post.empty() ? '?' : a_post[0],
                                             a_mu0, a_mu1, a_mu2, &out.ptr, &err.ptr);
    ct_design_free(design);
    if (st != CT_OK) {
      std::cerr << "error: " << err.str() << "\n";
      return status_to_exit(st);
    }
    std::cout << out.str() << "\n";
    return kExitOk;
  }

  if (cmd_sim->parsed()) {
    if (s_config.empty() && s_design.empty()) {
      std::cerr << "error: simulate needs --config or --design\n";
      return kExitValidation;
    }
    const int mu_flags = (s_mu0 >= 0.0) + (s_mu1 >= 0.0) + (s_mu2 >= 0.0);
    if (mu_flags != 0 && mu_flags != 3) {
      std::cerr << "error: profile override needs all of --mu0 --mu1 --mu2\n";
      return kExitValidation;
    }
    ct_design* design = nullptr;
    std::string bundle;
    const int rc = obtain_design(s_config, s_design, s_knobs, &design, &bundle);
    if (rc != kExitOk) return rc;
    OwnedString out, err;
    const ct_status st =
        ct_simulate_csv(design, s_post.empty() ? '?' : s_post[0], s_mu0, s_mu1,
                        s_mu2, s_epochs, s_seed, &out.ptr, &err.ptr);
    ct_design_free(design);
    if (st != CT_OK) {
      std::cerr << "error: " << err.str() << "\n";
      return status_to_exit(st);
    }
    if (!write_file(s_out, out.str())) {
      std::cerr << "error: cannot write " << s_out << "\n";
      return kExitInternal;
    }
    write_manifest("simulate", s_out, s_config.empty() ? s_design : s_config,
                   bundle,
                   {{"seed", s_seed},
                    {"post", s_post},
                    {"epochs", s_epochs},
                    {"profile_override",
                     s_mu0 >= 0.0 || s_mu1 >= 0.0 || s_mu2 >= 0.0}});
    return kExitOk;
  }

  if (cmd_ne->parsed()) {
    ct_design* design = nullptr;
    std::string bundle;
    const int rc = obtain_design("", n_design, {}, &design, &bundle);
    if (rc != kExitOk) return rc;
    OwnedString out, err;
    const ct_status st = ct_verify_ne(design, n_grid, &out.ptr, &err.ptr);
    ct_design_free(design);
    if (st != CT_OK) {
      std::cerr << "error: " << err.str() << "\n";
      return status_to_exit(st);
    }
    if (n_out.empty()) {
      std::cout << out.str() << "\n";
    } else {
      if (!write_file(n_out, out.str() + "\n")) {
        std::cerr << "error: cannot write " << n_out << "\n";
        return kExitInternal;
      }
      write_manifest("verify-ne", n_out, n_design, bundle,
                     {{"grid_step", n_grid}});
    }
    return kExitOk;
  }

  if (cmd_sweep->parsed()) {
    const std::string knobs_json = w_knobs.to_json();
    OwnedString csv, summary, err;
    const ct_status st = ct_sweep_csv(
        w_theta, w_d.data(), static_cast<int>(w_d.size()), w_n, w_seed,
        knobs_json.empty() ? nullptr : knobs_json.c_str(), &csv.ptr,
        &summary.ptr, &err.ptr);
    if (st != CT_OK) {
      std::cerr << "error: " << err.str() << "\n";
      return status_to_exit(st);
    }
    if (!write_file(w_out, csv.str())) {
      std::cerr << "error: cannot write " << w_out << "\n";
      return kExitInternal;
    }
    nlohmann::json extra;
    extra["seed"] = w_seed;
    extra["sweep_summary"] = nlohmann::json::parse(summary.str());
    write_manifest("sweep", w_out, "", "", extra);
    return kExitOk;
  }

  return kExitValidation;
}
