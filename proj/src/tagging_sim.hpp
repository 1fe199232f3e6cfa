// Embedded stochastic tagging chain: at every epoch one participant tags the
// post and the running fraction of fake tags (and with it the warning) moves.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core_model.hpp"

namespace crowdtag {

enum class TaggerKind : char {
  Adversarial = 'a',  // always declares the post real
  CapacityOnly = '1',
  WarningUser = '2'
};

struct TagTrajectory {
  PostType post = PostType::Fake;
  uint64_t seed = 0;
  double eta = 0.0;
  double eta_a = 0.0;
  double slope = 0.0;               // composed-response slope m_u
  long long fake_tag_count = 0;     // X_K
  std::vector<double> betas;        // betas[k-1] = beta_k = X_k / k
  std::vector<TaggerKind> taggers;  // participant type per epoch
  std::vector<bool> fake_tags;      // tag == fake per epoch
};

// Runs the chain for `epochs` taggers starting from X_0 = 0, beta_0 = 0.
// Epoch k+1 draws the participant type with probabilities (eta_a, eta,
// 1-eta-eta_a), then tags fake with probability 0 / alpha_u /
// min{m_u * beta_k, 1}. Two SplitMix64 draws per epoch, in that order.
TagTrajectory simulate(PostType u, const ParticipantFractions& fr,
                       const SystemParams& params, double w, long long epochs,
                       uint64_t seed);

// Variant with a synthetic pre-history fraction: the epoch-1 tagger sees a
// warning computed from beta0 instead of 0. From epoch 1 on the chain is the
// integer ratio X_k / k as in simulate(). Confirms the limit is insensitive
// to the initial warning.
TagTrajectory simulate_from(PostType u, const ParticipantFractions& fr,
                            const SystemParams& params, double w,
                            long long epochs, uint64_t seed, double beta0);

struct ConvergenceReport {
  bool converged = false;
  double final_gap = 0.0;
  // least k with |beta_k - target| < tol and |beta_j - target| < 2*tol for
  // all j >= k; empty when no such epoch exists
  std::optional<std::size_t> first_entry_epoch;
};

ConvergenceReport convergence_report(const TagTrajectory& traj, double target,
                                     double tol);

std::string trajectory_csv(const TagTrajectory& traj);

}  // namespace crowdtag
