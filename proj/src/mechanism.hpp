// End-to-end incentive design: theta-tilde selection, the feasible interval
// for the warning scale, the equilibrium type-1 fraction, and the reward pair
// (gamma, R) that makes actuality identification a Nash equilibrium.
#pragma once

#include <optional>
#include <string>
#include <variant>

#include "core_model.hpp"

namespace crowdtag {

struct DesignKnobs {
  // theta-tilde inflation; unset = adaptive rule (step kAutoEpsMaxStep above
  // the minimum admissible theta-tilde, at most kAutoEpsRoomFraction of the
  // remaining room to the cap at 1)
  std::optional<double> eps;
  // position of c*w*alpha_R inside (lo, hi); unset = midpoint
  std::optional<double> eps1;
  // eta above eta_bar, within (0, eta_star_tilde - eta_bar]; unset = midpoint
  std::optional<double> eps2;
  // gamma = (1 + gamma_margin) * gamma_lower
  double gamma_margin = kDefaultGammaMargin;

  static constexpr double kDefaultGammaMargin = 9.0;
  static constexpr double kAutoEpsMaxStep = 0.02;
  static constexpr double kAutoEpsRoomFraction = 0.25;
};

struct MechanismDesign {
  SystemParams params;
  DesignTarget target;

  double theta_tilde = 0.0;
  double w = 0.0;      // warning scale (c*w*alpha_R is the design invariant)
  double eta = 0.0;    // equilibrium fraction of capacity-only taggers
  double gamma = 0.0;  // reward ratio for warning users
  double R = 0.0;      // per-capita reward budget on success

  struct Diagnostics {
    double f_value = 0.0;
    double kappa = 0.0;
    double K_delta = 0.0;
    std::optional<double> theta_2;  // upper root; absent when K_delta < 0
    double theta_star = 0.0;
    double w_lo = 0.0;  // feasible interval for c*w*alpha_R
    double w_hi = 0.0;
    double cw_alpha_R = 0.0;
    double eta_bar = 0.0;
    double eta_star_tilde = 0.0;
    double gamma_lower = 0.0;
  } diag;

  struct ResolvedKnobs {
    double eps = 0.0;  // 0 when the theta > f branch was taken
    double eps1 = 0.0;
    double eps2 = 0.0;
    double gamma_margin = 0.0;
    bool eps_auto = true;
    bool eps1_midpoint = true;
    bool eps2_midpoint = true;
  } knobs;
};

struct NotDesignable {
  enum class Reason {
    OutsideFeasibleRegion,  // theta <= f and K_delta < 0
    ThetaTildeEdge,         // theta-tilde pinned at 1, no valid eta remains
    HypothesisViolation     // empty w-interval / eta interval
  };
  Reason reason;
  std::string detail;
};

const char* reason_code(NotDesignable::Reason r);

using DesignOutcome = std::variant<MechanismDesign, NotDesignable>;

inline bool designable(const DesignOutcome& o) {
  return std::holds_alternative<MechanismDesign>(o);
}

// f(theta, delta): theta must exceed it for the target to be directly
// achievable. Throws std::domain_error on the boundary-degenerate
// delta_a = alpha_R * eta_star(theta) configuration.
double f_threshold(double theta, double delta, const SystemParams& params);

// (kappa, K_delta) of the designability quadratic.
std::array<double, 2> kappa_Kdelta(double delta, const SystemParams& params);

// eta_star(l) = (1-l)(1-mu_a)/(1-alpha_F)
double eta_star(double level, const SystemParams& params);

// Effective detection level: theta when theta > f; otherwise lifted above the
// quadratic's upper root (NotDesignable when K_delta < 0 or the lift hits 1).
struct ThetaTildeResult {
  double value = 0.0;
  double eps_used = 0.0;
  std::optional<double> theta_2;
  double theta_star = 0.0;
  double f_value = 0.0;
};
std::variant<ThetaTildeResult, NotDesignable> theta_tilde(
    double theta, double delta, const SystemParams& params,
    const DesignKnobs& knobs);

// Feasible open interval for c*w*alpha_R. Throws std::runtime_error when
// hi <= lo (only possible outside the design hypotheses).
std::array<double, 2> w_interval(double theta_tilde, double delta,
                                 const SystemParams& params);

// Full pipeline. Knob values outside their admissible intervals throw
// std::invalid_argument; infeasibility is returned as NotDesignable.
DesignOutcome choose_design(const DesignTarget& target,
                            const SystemParams& params,
                            const DesignKnobs& knobs = {});

}  // namespace crowdtag
