// Limiting fraction of fake tags for a fixed population profile: closed form,
// independent bisection oracle, and the exact piecewise-exponential trajectory
// of the tagging ODE.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "core_model.hpp"

namespace crowdtag {

enum class Regime {
  Saturated,  // composed response pinned at 1 around the fixed point
  Interior    // composed response below 1 at the fixed point
};

struct AttractorResult {
  double beta_star = 0.0;
  Regime regime = Regime::Interior;
  double rho_bar = 0.0;  // alpha_u*eta + 1 - eta - eta_a
  double rho = 0.0;      // 1 - (1 - eta - eta_a) * m_u
};

// Drift g_u(beta) = alpha_u*eta + (1-eta-eta_a)*min{m_u*beta, 1} - beta.
double ode_rhs(PostType u, double beta, const ParticipantFractions& fr,
               const SystemParams& params, double w);

// Unique zero of the drift on [0,1] (ties at rho_bar = 1/m_u resolve to
// Saturated; both branches agree there).
AttractorResult attractor_closed_form(PostType u, const ParticipantFractions& fr,
                                      const SystemParams& params, double w);

// Sign-bisection on beta - (alpha_u*eta + (1-eta-eta_a)*min{m_u*beta,1})
// over [0,1]; independent of the closed form. Throws std::runtime_error if
// the bracket has no sign change (cannot happen for valid inputs).
double attractor_bisection(PostType u, const ParticipantFractions& fr,
                           const SystemParams& params, double w, double tol);

// Exact solution of the piecewise-linear ODE beta' = g_u(beta) evaluated on
// t_grid (non-negative, increasing). Within each response regime the motion
// is an exponential relaxation toward that branch's fixed point; the regime
// crossing time comes from the closed-form crossing condition, never from a
// numerical stepper.
std::vector<std::pair<double, double>> ode_trajectory(
    PostType u, double beta0, const ParticipantFractions& fr,
    const SystemParams& params, double w, std::span<const double> t_grid);

}  // namespace crowdtag
