// Utilities, success probability, the Nash-equilibrium set of the designed
// game, a best-response scan over the strategy simplex, and the degradation
// metric of the secondary equilibrium.
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "attractor.hpp"
#include "core_model.hpp"
#include "mechanism.hpp"

namespace crowdtag {

inline constexpr double kUtilityTol = 1e-9;

enum class NeClass { AI, NonAI };

struct NeProfile {
  PopulationProfile mu;
  NeClass classification = NeClass::NonAI;
  double success_prob = 0.0;
  std::array<double, 3> utilities{};  // U(0), U(1), U(2)
  double beta_F = 0.0;
  double beta_R = 0.0;
};

struct NeReport {
  std::vector<NeProfile> ne_list;
  double x_eta = 0.0;
  bool second_ne_exists = false;
  std::optional<double> degradation_P;  // percent; absent without a second NE
  // the closed-form condition x_eta > eta_star_tilde and the best-response
  // verification can disagree on rare configs; flagged, never guessed
  bool second_ne_criteria_disagree = false;
};

// P(success) = p*1{beta_F* >= theta_a} + (1-p)*1{beta_R* <= delta_a}, with
// attractors at (eta(mu), eta_a(mu)). The all-abstain profile is defined as 0.
double success_prob(const PopulationProfile& mu, double theta, double delta,
                    const SystemParams& params, const MechanismDesign& design);

// Mean-field utility of strategy s in {0,1,2} against profile mu. Throws
// std::domain_error when the reward denominator mu1 + mu_a + gamma*mu2 is 0.
double utility(int s, const PopulationProfile& mu, const SystemParams& params,
               const MechanismDesign& design);

struct XEtaResult {
  double value = 0.0;
  bool exceeds_eta_star_tilde = false;
};
// Type-1 fraction at which strategies 1 and 2 tie under success prob 1-p.
XEtaResult x_eta(const MechanismDesign& design, const SystemParams& params);

// mu_x = (0, x, 1 - x - mu_a)
PopulationProfile profile_x(double x, double mu_a);

// The designed equilibrium mu_eta plus, when it exists, the secondary
// equilibrium mu_{x_eta}; every listed profile is certified against the
// best-response definition at tolerance kUtilityTol.
NeReport ne_set(const MechanismDesign& design, const SystemParams& params);

// Exhaustive best-response screen over the simplex grid (step h): a profile
// survives when no strategy improves on its support by more than the utility
// change attainable within one grid cell (h times the local tie-line slope).
std::vector<PopulationProfile> ne_grid_scan(const MechanismDesign& design,
                                            const SystemParams& params,
                                            double grid_step);

// P = 100 * (theta_a - beta_F^{x_eta}) / theta_a with theta_a = theta*(1-mu_a).
// Empty when the second equilibrium does not exist.
std::optional<double> degradation_metric(const MechanismDesign& design,
                                         const SystemParams& params);

}  // namespace crowdtag
