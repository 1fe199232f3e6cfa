#include "tagging_sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rng.hpp"

namespace crowdtag {

namespace {

TagTrajectory run_chain(PostType u, const ParticipantFractions& fr,
                        const SystemParams& params, double w, long long epochs,
                        uint64_t seed, double beta0) {
  if (epochs < 1) throw std::invalid_argument("simulate: epochs must be >= 1");
  if (fr.eta < 0.0 || fr.eta_a < 0.0 || fr.eta + fr.eta_a > 1.0 + 1e-12)
    throw std::invalid_argument("simulate: invalid participant fractions");

  TagTrajectory traj;
  traj.post = u;
  traj.seed = seed;
  traj.eta = fr.eta;
  traj.eta_a = fr.eta_a;
  traj.slope = effective_slope(u, params, w);
  traj.betas.reserve(static_cast<std::size_t>(epochs));
  traj.taggers.reserve(static_cast<std::size_t>(epochs));
  traj.fake_tags.reserve(static_cast<std::size_t>(epochs));

  SplitMix64 rng(seed);
  const double alpha_u = params.alpha(u);
  long long fake_count = 0;
  double beta = beta0;

  for (long long k = 0; k < epochs; ++k) {
    const double u_type = rng.next_double();
    TaggerKind kind;
    double prob_fake;
    if (u_type < fr.eta_a) {
      kind = TaggerKind::Adversarial;
      prob_fake = 0.0;  // adversaries declare every post real
    } else if (u_type < fr.eta_a + fr.eta) {
      kind = TaggerKind::CapacityOnly;
      prob_fake = alpha_u;
    } else {
      kind = TaggerKind::WarningUser;
      prob_fake = std::min(traj.slope * beta, 1.0);
    }
    const bool tagged_fake = rng.next_double() < prob_fake;
    if (tagged_fake) ++fake_count;
    beta = static_cast<double>(fake_count) / static_cast<double>(k + 1);
    traj.betas.push_back(beta);
    traj.taggers.push_back(kind);
    traj.fake_tags.push_back(tagged_fake);
  }
  traj.fake_tag_count = fake_count;
  return traj;
}

}  // namespace

TagTrajectory simulate(PostType u, const ParticipantFractions& fr,
                       const SystemParams& params, double w, long long epochs,
                       uint64_t seed) {
  return run_chain(u, fr, params, w, epochs, seed, 0.0);
}

TagTrajectory simulate_from(PostType u, const ParticipantFractions& fr,
                            const SystemParams& params, double w,
                            long long epochs, uint64_t seed, double beta0) {
  if (beta0 < 0.0 || beta0 > 1.0)
    throw std::domain_error("simulate_from: beta0 outside [0,1]");
  return run_chain(u, fr, params, w, epochs, seed, beta0);
}

ConvergenceReport convergence_report(const TagTrajectory& traj, double target,
                                     double tol) {
  if (tol <= 0.0) throw std::invalid_argument("convergence_report: tol <= 0");
  ConvergenceReport rep;
  if (traj.betas.empty()) return rep;

  rep.final_gap = std::abs(traj.betas.back() - target);
  rep.converged = rep.final_gap < tol;

  // last epoch that strays beyond 2*tol; entry must happen after it
  std::size_t last_violation = 0;
  bool any_violation = false;
  for (std::size_t i = traj.betas.size(); i-- > 0;) {
    if (std::abs(traj.betas[i] - target) >= 2.0 * tol) {
      last_violation = i;
      any_violation = true;
      break;
    }
  }
  const std::size_t start = any_violation ? last_violation + 1 : 0;
  for (std::size_t i = start; i < traj.betas.size(); ++i) {
    if (std::abs(traj.betas[i] - target) < tol) {
      rep.first_entry_epoch = i + 1;  // epochs are 1-based
      break;
    }
  }
  return rep;
}

std::string trajectory_csv(const TagTrajectory& traj) {
  std::ostringstream os;
  os << "k,beta,participant_type,tag\n";
  char line[64];
  for (std::size_t i = 0; i < traj.betas.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%c,%c\n", i + 1,
                  traj.betas[i], static_cast<char>(traj.taggers[i]),
                  traj.fake_tags[i] ? 'F' : 'R');
    os << line;
  }
  return os.str();
}

}  // namespace crowdtag
