// JSON wire formats: config files, design bundles, equilibrium reports and
// knob objects. Parsing is strict — unknown or missing keys name the
// offending key in the thrown error.
#pragma once

#include <stdexcept>
#include <string>

#include "core_model.hpp"
#include "equilibrium.hpp"
#include "mechanism.hpp"

namespace crowdtag {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat config with exactly the keys alpha_R alpha_F mu_a p a b c C_e Q_p
// Q_np theta delta.
std::pair<SystemParams, DesignTarget> parse_config_json(const std::string& text);

std::string validation_report_json(const ValidationReport& report);

// {"eps": num|"auto", "eps1": num|"midpoint", "eps2": num|"midpoint",
//  "gamma_margin": num}; every key optional; empty/absent text = defaults.
DesignKnobs parse_knobs_json(const std::string& text);

// Bundle embeds params, target, resolved knobs, design fields, diagnostics
// and a FNV-1a digest of the parameter block for round-trip checks.
std::string design_bundle_json(const MechanismDesign& design);
MechanismDesign parse_design_bundle_json(const std::string& text);

std::string ne_report_json(const NeReport& report, const MechanismDesign& design);

std::string attractor_json(const AttractorResult& result);

// digest used to tie reports back to the exact parameter block
std::string params_digest(const SystemParams& params, const DesignTarget& target);

}  // namespace crowdtag
