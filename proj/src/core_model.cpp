#include "core_model.hpp"

#include <cmath>
#include <stdexcept>

namespace crowdtag {

ValidationReport validate_params(const SystemParams& p) {
  ValidationReport r;
  auto fail = [&r](const char* what) { r.violations.emplace_back(what); };

  if (!(p.alpha_R > 0.0)) fail("alpha_R <= 0");
  if (!(p.alpha_F > p.alpha_R)) fail("alpha_F <= alpha_R");
  if (!(p.alpha_F < 1.0)) fail("alpha_F >= 1");
  if (!(p.mu_a >= 0.0)) fail("mu_a < 0");
  if (!(p.mu_a < 1.0)) fail("mu_a >= 1");
  if (!(p.p > 0.0)) fail("p <= 0");
  if (!(p.p < 1.0)) fail("p >= 1");
  if (!(p.a > 0.0)) fail("a <= 0");
  if (!(p.b > 0.0)) fail("b <= 0");
  if (!(p.c > 0.0)) fail("c <= 0");
  if (!(p.C_e > 0.0)) fail("C_e <= 0");
  if (!(p.Q_np <= p.Q_p)) fail("Q_np > Q_p");
  return r;
}

ValidationReport validate_system(const SystemParams& p,
                                 const DesignTarget& t) {
  ValidationReport r = validate_params(p);
  auto fail = [&r](const char* what) { r.violations.emplace_back(what); };

  if (!(t.delta > p.alpha_R)) fail("delta <= alpha_R");
  if (!(t.delta < t.theta)) fail("delta >= theta");
  if (!(t.theta <= 1.0)) fail("theta > 1");
  if (!(t.theta > p.alpha_F)) fail("theta <= alpha_F");
  if (p.alpha_R > 0.0 && p.alpha_F > p.alpha_R) {
    const double floor = t.delta / std::pow(p.capacity_ratio(), p.a);
    if (!(t.theta > floor)) fail("theta <= delta / Delta_R^a");
  }
  return r;
}

bool profile_is_valid(const PopulationProfile& mu, double mu_a) {
  if (mu.mu0 < 0.0 || mu.mu1 < 0.0 || mu.mu2 < 0.0) return false;
  return std::abs(mu.mu0 + mu.mu1 + mu.mu2 - (1.0 - mu_a)) <= kProfileSumTol;
}

ParticipantFractions participant_fractions(const PopulationProfile& mu,
                                           double mu_a) {
  if (!profile_is_valid(mu, mu_a))
    throw std::invalid_argument("population profile does not sum to 1 - mu_a");
  const double participants = mu.mu1 + mu.mu2 + mu_a;
  if (participants <= 0.0)
    throw std::domain_error("degenerate population: nobody participates");
  return {mu.mu1 / participants, mu_a / participants};
}

double warning_level(double beta, double w, double a, double b,
                     double alpha_R) {
  if (beta < 0.0) throw std::domain_error("warning_level: beta < 0");
  if (beta == 0.0) return 0.0;
  return std::pow(w, 1.0 / b) * std::pow(alpha_R, (1.0 - a) / b) *
         std::pow(beta, 1.0 / b);
}

double response(double alpha, double omega, double a, double b, double c) {
  if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("response: alpha outside [0,1]");
  if (omega < 0.0) throw std::domain_error("response: omega < 0");
  const double h = c * std::pow(alpha, a) * std::pow(omega, b);
  return h < 1.0 ? h : 1.0;
}

double effective_slope(PostType u, const SystemParams& params, double w) {
  return params.c * w * params.alpha_R *
         std::pow(params.alpha(u) / params.alpha_R, params.a);
}

std::array<double, 2> success_thresholds(double theta, double delta,
                                         const ParticipantFractions& fr) {
  return {theta * (1.0 - fr.eta_a), delta * (1.0 - fr.eta_a)};
}

}  // namespace crowdtag
