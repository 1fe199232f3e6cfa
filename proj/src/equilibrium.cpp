#include "equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowdtag {

namespace {

std::array<double, 2> attractors_at(const PopulationProfile& mu,
                                    const SystemParams& params,
                                    const MechanismDesign& design) {
  const ParticipantFractions fr = participant_fractions(mu, params.mu_a);
  return {attractor_closed_form(PostType::Fake, fr, params, design.w).beta_star,
          attractor_closed_form(PostType::Real, fr, params, design.w).beta_star};
}

double reward_denominator(const PopulationProfile& mu,
                          const SystemParams& params, double gamma) {
  return mu.mu1 + params.mu_a + gamma * mu.mu2;
}

std::array<double, 3> utilities_at(const PopulationProfile& mu,
                                   const SystemParams& params,
                                   const MechanismDesign& design) {
  const double P =
      success_prob(mu, design.target.theta, design.target.delta, params, design);
  const double denom = reward_denominator(mu, params, design.gamma);
  if (denom <= 0.0)
    throw std::domain_error("utility: reward denominator is zero");
  return {params.Q_np, params.Q_p + design.R * P / denom,
          params.Q_p - params.C_e + design.gamma * design.R * P / denom};
}

// support(mu) within argmax of the utilities, at tolerance tol
bool best_response_holds(const PopulationProfile& mu,
                         const std::array<double, 3>& u, double tol) {
  const double best = std::max({u[0], u[1], u[2]});
  const std::array<double, 3> shares{mu.mu0, mu.mu1, mu.mu2};
  for (int s = 0; s < 3; ++s)
    if (shares[s] > 0.0 && best - u[s] > tol) return false;
  return true;
}

NeProfile certify(const PopulationProfile& mu, const SystemParams& params,
                  const MechanismDesign& design) {
  NeProfile prof;
  prof.mu = mu;
  const auto [bF, bR] = attractors_at(mu, params, design);
  prof.beta_F = bF;
  prof.beta_R = bR;
  prof.success_prob =
      success_prob(mu, design.target.theta, design.target.delta, params, design);
  prof.utilities = utilities_at(mu, params, design);
  const ParticipantFractions fr = participant_fractions(mu, params.mu_a);
  const auto [theta_a, delta_a] =
      success_thresholds(design.target.theta, design.target.delta, fr);
  prof.classification = (bF >= theta_a && bR <= delta_a) ? NeClass::AI
                                                         : NeClass::NonAI;
  return prof;
}

}  // namespace

double success_prob(const PopulationProfile& mu, double theta, double delta,
                    const SystemParams& params,
                    const MechanismDesign& design) {
  if (!profile_is_valid(mu, params.mu_a))
    throw std::invalid_argument("success_prob: invalid profile");
  if (mu.mu1 == 0.0 && mu.mu2 == 0.0) return 0.0;  // all-abstain convention
  const ParticipantFractions fr = participant_fractions(mu, params.mu_a);
  const auto [theta_a, delta_a] = success_thresholds(theta, delta, fr);
  const double bF =
      attractor_closed_form(PostType::Fake, fr, params, design.w).beta_star;
  const double bR =
      attractor_closed_form(PostType::Real, fr, params, design.w).beta_star;
  return params.p * (bF >= theta_a ? 1.0 : 0.0) +
         (1.0 - params.p) * (bR <= delta_a ? 1.0 : 0.0);
}

double utility(int s, const PopulationProfile& mu, const SystemParams& params,
               const MechanismDesign& design) {
  if (s < 0 || s > 2) throw std::invalid_argument("utility: s must be 0, 1 or 2");
  return utilities_at(mu, params, design)[static_cast<std::size_t>(s)];
}

XEtaResult x_eta(const MechanismDesign& design, const SystemParams& params) {
  XEtaResult res;
  res.value = params.p / (design.gamma - 1.0) +
              params.p * (1.0 - params.mu_a - design.eta) + design.eta;
  res.exceeds_eta_star_tilde = res.value > design.diag.eta_star_tilde;
  return res;
}

PopulationProfile profile_x(double x, double mu_a) {
  return {0.0, x, 1.0 - x - mu_a};
}

NeReport ne_set(const MechanismDesign& design, const SystemParams& params) {
  NeReport rep;

  const PopulationProfile mu_eta = profile_x(design.eta, params.mu_a);
  NeProfile primary = certify(mu_eta, params, design);
  if (!best_response_holds(mu_eta, primary.utilities, kUtilityTol))
    throw std::runtime_error("ne_set: designed profile failed certification");
  rep.ne_list.push_back(primary);

  const XEtaResult xe = x_eta(design, params);
  rep.x_eta = xe.value;

  bool verified = false;
  if (xe.value > 0.0 && xe.value < 1.0 - params.mu_a) {
    const PopulationProfile mu_x = profile_x(xe.value, params.mu_a);
    NeProfile secondary = certify(mu_x, params, design);
    verified = best_response_holds(mu_x, secondary.utilities, kUtilityTol);
    if (verified) rep.ne_list.push_back(secondary);
  }
  rep.second_ne_exists = verified;
  rep.second_ne_criteria_disagree = (xe.exceeds_eta_star_tilde != verified);
  if (verified) {
    const double theta_a = design.target.theta * (1.0 - params.mu_a);
    rep.degradation_P = 100.0 * (theta_a - rep.ne_list.back().beta_F) / theta_a;
  }
  return rep;
}

std::vector<PopulationProfile> ne_grid_scan(const MechanismDesign& design,
                                            const SystemParams& params,
                                            double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1))
    throw std::invalid_argument("ne_grid_scan: grid_step outside (0, 0.1]");

  const double budget = 1.0 - params.mu_a;
  const auto n_steps = static_cast<long>(std::floor(budget / grid_step + 1e-9));

  std::vector<PopulationProfile> out;
  // parameterize by (mu0, mu1); mu2 absorbs the remainder so the mu0 = 0 edge
  // (where the equilibria live) is always exactly on the grid
  for (long i = 0; i <= n_steps; ++i) {
    const double mu0 = std::min(budget, static_cast<double>(i) * grid_step);
    for (long j = 0;; ++j) {
      const double mu1 = static_cast<double>(j) * grid_step;
      const double mu2 = budget - mu0 - mu1;
      if (mu2 < -kProfileSumTol) break;
      const PopulationProfile mu{mu0, mu1, std::max(0.0, mu2)};
      if (mu.mu1 == 0.0 && mu.mu2 == 0.0 && params.mu_a == 0.0) continue;

      const double P = success_prob(mu, design.target.theta,
                                    design.target.delta, params, design);
      const double denom = reward_denominator(mu, params, design.gamma);
      const std::array<double, 3> u{
          params.Q_np, params.Q_p + design.R * P / denom,
          params.Q_p - params.C_e + design.gamma * design.R * P / denom};
      // exact slope of the U(2)-U(1) gap along the type-1/type-2 exchange
      // direction; one grid step can move the gap by at most slope*h there
      const double slope = (design.gamma - 1.0) * (design.gamma - 1.0) *
                           design.R * P / (denom * denom);
      const double tol = grid_step * slope + 1e-12;

      const double best = std::max({u[0], u[1], u[2]});
      double worst_supported = best;
      const std::array<double, 3> shares{mu.mu0, mu.mu1, mu.mu2};
      for (int s = 0; s < 3; ++s)
        if (shares[s] > 0.0) worst_supported = std::min(worst_supported, u[s]);
      if (best - worst_supported <= tol) out.push_back(mu);
    }
  }
  return out;
}

std::optional<double> degradation_metric(const MechanismDesign& design,
                                         const SystemParams& params) {
  const NeReport rep = ne_set(design, params);
  return rep.degradation_P;
}

}  // namespace crowdtag
