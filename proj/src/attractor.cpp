#include "attractor.hpp"

#include <cmath>
#include <stdexcept>

namespace crowdtag {

namespace {

struct Pieces {
  double m;        // composed-response slope
  double s;        // saturation threshold 1/m
  double eta;
  double eta_a;
  double alpha;
  double rho;      // 1 - (1-eta-eta_a)*m
  double rho_bar;  // alpha*eta + 1 - eta - eta_a
};

Pieces make_pieces(PostType u, const ParticipantFractions& fr,
                   const SystemParams& params, double w) {
  if (w <= 0.0) throw std::invalid_argument("attractor: w must be positive");
  if (fr.eta < 0.0 || fr.eta_a < 0.0 || fr.eta + fr.eta_a > 1.0 + 1e-12)
    throw std::invalid_argument("attractor: invalid participant fractions");
  Pieces pc;
  pc.m = effective_slope(u, params, w);
  pc.s = 1.0 / pc.m;
  pc.eta = fr.eta;
  pc.eta_a = fr.eta_a;
  pc.alpha = params.alpha(u);
  const double type2 = std::max(0.0, 1.0 - fr.eta - fr.eta_a);
  pc.rho = 1.0 - type2 * pc.m;
  pc.rho_bar = pc.alpha * fr.eta + type2;
  return pc;
}

double drift(const Pieces& pc, double beta) {
  const double r = std::min(pc.m * beta, 1.0);
  return pc.alpha * pc.eta + (1.0 - pc.eta - pc.eta_a) * r - beta;
}

}  // namespace

double ode_rhs(PostType u, double beta, const ParticipantFractions& fr,
               const SystemParams& params, double w) {
  if (beta < 0.0 || beta > 1.0)
    throw std::domain_error("ode_rhs: beta outside [0,1]");
  return drift(make_pieces(u, fr, params, w), beta);
}

AttractorResult attractor_closed_form(PostType u,
                                      const ParticipantFractions& fr,
                                      const SystemParams& params, double w) {
  const Pieces pc = make_pieces(u, fr, params, w);
  AttractorResult res;
  res.rho = pc.rho;
  res.rho_bar = pc.rho_bar;
  // rho <= 0 forces rho_bar >= 1/m; the tie rho_bar = 1/m yields the same
  // beta on both branches. The eta + eta_a = 1 edge (no warning users) falls
  // out of either branch as alpha*eta.
  if (pc.rho <= 0.0 || pc.rho_bar >= pc.s) {
    res.regime = Regime::Saturated;
    res.beta_star = pc.rho_bar;
  } else {
    res.regime = Regime::Interior;
    res.beta_star = pc.alpha * pc.eta / pc.rho;
  }
  return res;
}

double attractor_bisection(PostType u, const ParticipantFractions& fr,
                           const SystemParams& params, double w, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("attractor_bisection: tol <= 0");
  const Pieces pc = make_pieces(u, fr, params, w);
  double lo = 0.0, hi = 1.0;
  double glo = drift(pc, lo), ghi = drift(pc, hi);
  if (glo < 0.0 || ghi > 0.0)
    throw std::runtime_error("attractor_bisection: no sign change on [0,1]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double g = drift(pc, mid);
    if (g > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::pair<double, double>> ode_trajectory(
    PostType u, double beta0, const ParticipantFractions& fr,
    const SystemParams& params, double w, std::span<const double> t_grid) {
  if (beta0 < 0.0 || beta0 > 1.0)
    throw std::domain_error("ode_trajectory: beta0 outside [0,1]");
  const Pieces pc = make_pieces(u, fr, params, w);

  // Each regime relaxes exponentially toward its own fixed point:
  //   saturated  (beta >= 1/m): beta' = rho_bar - beta        rate 1
  //   unsaturated(beta <  1/m): beta' = alpha*eta - rho*beta  rate rho
  // At most one crossing of the threshold s = 1/m ever happens.
  struct Segment {
    double t0;      // segment start time
    double b0;      // value at t0
    double target;  // fixed point of the affine piece (meaningless if rate==0)
    double rate;    // decay rate toward target; 0 means constant drift
    double slope;   // used only when rate == 0: beta(t) = b0 + slope*(t - t0)
  };
  std::vector<Segment> segs;

  const double ae = pc.alpha * pc.eta;
  double tau = -1.0;  // regime switch time, if any

  if (beta0 >= pc.s) {
    // saturated start
    if (pc.rho_bar >= pc.s) {
      segs.push_back({0.0, beta0, pc.rho_bar, 1.0, 0.0});
    } else {
      // moving down, exits saturation at tau
      tau = std::log((beta0 - pc.rho_bar) / (pc.s - pc.rho_bar));
      segs.push_back({0.0, beta0, pc.rho_bar, 1.0, 0.0});
      segs.push_back({tau, pc.s, ae / pc.rho, pc.rho, 0.0});
    }
  } else {
    // unsaturated start
    if (pc.rho > 0.0 && ae / pc.rho < pc.s) {
      segs.push_back({0.0, beta0, ae / pc.rho, pc.rho, 0.0});
    } else if (pc.rho == 0.0) {
      if (ae == 0.0) {
        segs.push_back({0.0, beta0, beta0, 0.0, 0.0});  // whole piece is fixed
      } else {
        tau = (pc.s - beta0) / ae;
        segs.push_back({0.0, beta0, 0.0, 0.0, ae});
        segs.push_back({tau, pc.s, pc.rho_bar, 1.0, 0.0});
      }
    } else {
      // heading up through the threshold (interior fixed point above s or
      // repelling below zero when rho < 0)
      const double bint = ae / pc.rho;
      if (pc.rho < 0.0 && beta0 == bint) {
        segs.push_back({0.0, beta0, beta0, 0.0, 0.0});  // unstable rest point
      } else {
        tau = std::log((bint - beta0) / (bint - pc.s)) / pc.rho;
        segs.push_back({0.0, beta0, bint, pc.rho, 0.0});
        segs.push_back({tau, pc.s, pc.rho_bar, 1.0, 0.0});
      }
    }
  }

  std::vector<std::pair<double, double>> out;
  out.reserve(t_grid.size());
  double prev_t = 0.0;
  bool first = true;
  for (double t : t_grid) {
    if (t < 0.0) throw std::invalid_argument("ode_trajectory: negative t");
    if (!first && t < prev_t)
      throw std::invalid_argument("ode_trajectory: t_grid not increasing");
    prev_t = t;
    first = false;

    const Segment* seg = &segs.front();
    if (segs.size() > 1 && t >= segs[1].t0) seg = &segs[1];
    double beta;
    if (seg->rate == 0.0) {
      beta = seg->b0 + seg->slope * (t - seg->t0);
    } else {
      beta = seg->target +
             std::exp(-seg->rate * (t - seg->t0)) * (seg->b0 - seg->target);
    }
    out.emplace_back(t, std::min(1.0, std::max(0.0, beta)));
  }
  return out;
}

}  // namespace crowdtag
