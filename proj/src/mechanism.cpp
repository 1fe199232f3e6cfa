#include "mechanism.hpp"

#include <cmath>
#include <stdexcept>

namespace crowdtag {

const char* reason_code(NotDesignable::Reason r) {
  switch (r) {
    case NotDesignable::Reason::OutsideFeasibleRegion:
      return "outside-feasible-region";
    case NotDesignable::Reason::ThetaTildeEdge:
      return "theta-tilde-edge";
    case NotDesignable::Reason::HypothesisViolation:
      return "hypothesis-violation";
  }
  return "unknown";
}

double eta_star(double level, const SystemParams& params) {
  return (1.0 - level) * (1.0 - params.mu_a) / (1.0 - params.alpha_F);
}

double f_threshold(double theta, double delta, const SystemParams& params) {
  const double Da = std::pow(params.capacity_ratio(), params.a);
  const double delta_a = delta * (1.0 - params.mu_a);
  const double es = eta_star(theta, params);
  const double den = Da * (delta_a - params.alpha_R * es);
  if (den == 0.0)
    throw std::domain_error(
        "f_threshold: boundary-degenerate config (delta_a = alpha_R * eta_star)");
  return (delta_a - es * delta) / den;
}

std::array<double, 2> kappa_Kdelta(double delta, const SystemParams& params) {
  const double Da = std::pow(params.capacity_ratio(), params.a);
  const double kappa =
      delta * (Da * (1.0 - params.alpha_F) - 1.0) - params.alpha_R * Da;
  const double K_delta =
      kappa * kappa - 4.0 * delta * params.alpha_R * params.alpha_F * Da;
  return {kappa, K_delta};
}

std::variant<ThetaTildeResult, NotDesignable> theta_tilde(
    double theta, double delta, const SystemParams& params,
    const DesignKnobs& knobs) {
  ThetaTildeResult res;
  res.f_value = f_threshold(theta, delta, params);
  const auto [kappa, K_delta] = kappa_Kdelta(delta, params);
  const double Da = std::pow(params.capacity_ratio(), params.a);
  res.theta_star = 1.0 - delta * (1.0 - params.alpha_F) / params.alpha_R;
  if (K_delta >= 0.0)
    res.theta_2 = (-kappa + std::sqrt(K_delta)) / (2.0 * Da * params.alpha_R);

  if (theta > res.f_value) {
    res.value = theta;
    res.eps_used = 0.0;
    return res;
  }
  if (K_delta < 0.0)
    return NotDesignable{NotDesignable::Reason::OutsideFeasibleRegion,
                         "theta <= f and K_delta < 0"};

  const double theta_2 = *res.theta_2;
  const double needed = std::max(0.0, theta - theta_2);
  const double base = std::max(theta_2, res.theta_star);
  double eps;
  if (knobs.eps) {
    eps = *knobs.eps;
    if (!(eps > needed))
      throw std::invalid_argument("knob eps must exceed max{0, theta - theta_2}");
  } else {
    const double floor = base + needed;  // infimum of admissible theta-tilde
    if (floor >= 1.0)
      return NotDesignable{NotDesignable::Reason::ThetaTildeEdge,
                           "minimum admissible theta-tilde reaches 1"};
    eps = needed + std::min(DesignKnobs::kAutoEpsMaxStep,
                            DesignKnobs::kAutoEpsRoomFraction * (1.0 - floor));
  }
  res.eps_used = eps;
  res.value = std::min(base + eps, 1.0);
  if (res.value >= 1.0)
    return NotDesignable{NotDesignable::Reason::ThetaTildeEdge,
                         "theta-tilde pinned at 1 (eta_star would vanish)"};
  return res;
}

std::array<double, 2> w_interval(double theta_tilde, double delta,
                                 const SystemParams& params) {
  const double Da = std::pow(params.capacity_ratio(), params.a);
  const double delta_a = delta * (1.0 - params.mu_a);
  const double es = eta_star(theta_tilde, params);
  const double lo =
      std::max(1.0, 1.0 / (Da * theta_tilde)) / (1.0 - params.mu_a);
  const double hi =
      std::min(1.0 / delta_a, (delta_a - es * params.alpha_R) /
                                  (delta_a * (1.0 - params.mu_a - es)));
  if (!(hi > lo))
    throw std::runtime_error("w_interval: empty feasible interval");
  return {lo, hi};
}

DesignOutcome choose_design(const DesignTarget& target,
                            const SystemParams& params,
                            const DesignKnobs& knobs) {
  const ValidationReport vr = validate_system(params, target);
  if (!vr.ok())
    throw std::invalid_argument("choose_design: validation failed: " +
                                vr.violations.front());

  auto tt = theta_tilde(target.theta, target.delta, params, knobs);
  if (std::holds_alternative<NotDesignable>(tt))
    return std::get<NotDesignable>(tt);
  const ThetaTildeResult& t = std::get<ThetaTildeResult>(tt);

  std::array<double, 2> interval;
  try {
    interval = w_interval(t.value, target.delta, params);
  } catch (const std::runtime_error&) {
    return NotDesignable{NotDesignable::Reason::HypothesisViolation,
                         "empty w-interval"};
  }
  const auto [lo, hi] = interval;

  double eps1;
  if (knobs.eps1) {
    eps1 = *knobs.eps1;
    if (!(eps1 > 0.0 && eps1 < hi - lo))
      throw std::invalid_argument("knob eps1 outside (0, hi - lo)");
  } else {
    eps1 = 0.5 * (hi - lo);
  }
  const double cw_alpha_R = lo + eps1;
  const double w = cw_alpha_R / (params.c * params.alpha_R);

  const double delta_a = target.delta * (1.0 - params.mu_a);
  const double eta_bar =
      delta_a * ((1.0 - params.mu_a) * cw_alpha_R - 1.0) /
      (cw_alpha_R * delta_a - params.alpha_R);
  const double es_tt = eta_star(t.value, params);
  if (!(es_tt > eta_bar))
    return NotDesignable{NotDesignable::Reason::HypothesisViolation,
                         "eta interval (eta_bar, eta_star_tilde] is empty"};

  double eps2;
  if (knobs.eps2) {
    eps2 = *knobs.eps2;
    if (!(eps2 > 0.0 && eps2 <= es_tt - eta_bar))
      throw std::invalid_argument("knob eps2 outside (0, eta_star_tilde - eta_bar]");
  } else {
    eps2 = 0.5 * (es_tt - eta_bar);
  }
  const double eta = eta_bar + eps2;

  if (!(knobs.gamma_margin > 0.0))
    throw std::invalid_argument("knob gamma_margin must be positive");
  const double gamma_lower =
      (1.0 / (1.0 - params.p)) *
      (1.0 - (eta + params.mu_a) * (1.0 - params.p)) /
      (1.0 - eta - params.mu_a);
  const double gamma = (1.0 + knobs.gamma_margin) * gamma_lower;
  const double R =
      params.C_e * (1.0 - eta - params.mu_a + 1.0 / (gamma - 1.0));

  MechanismDesign d;
  d.params = params;
  d.target = target;
  d.theta_tilde = t.value;
  d.w = w;
  d.eta = eta;
  d.gamma = gamma;
  d.R = R;
  d.diag = {t.f_value, kappa_Kdelta(target.delta, params)[0],
            kappa_Kdelta(target.delta, params)[1], t.theta_2, t.theta_star,
            lo, hi, cw_alpha_R, eta_bar, es_tt, gamma_lower};
  d.knobs = {t.eps_used, eps1, eps2, knobs.gamma_margin,
             !knobs.eps.has_value(), !knobs.eps1.has_value(),
             !knobs.eps2.has_value()};
  return d;
}

}  // namespace crowdtag
