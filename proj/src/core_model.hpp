// Domain parameters, response/warning functions, participant fractions and
// success thresholds. Everything here is a pure function of its inputs.
#pragma once

#include <array>
#include <string>
#include <vector>

namespace crowdtag {

enum class PostType { Fake, Real };

inline char post_char(PostType u) { return u == PostType::Fake ? 'F' : 'R'; }

struct SystemParams {
  double alpha_R = 0.0;  // prob. a capacity-only tagger flags the real post
  double alpha_F = 0.0;  // prob. a capacity-only tagger flags the fake post
  double mu_a = 0.0;     // population fraction of adversarial accounts
  double p = 0.0;        // prior prob. that a post is fake
  double a = 1.0;        // response exponent on innate capacity
  double b = 1.0;        // response exponent on the warning level
  double c = 1.0;        // response scale
  double C_e = 0.0;      // extra effort cost of processing the warning
  double Q_p = 0.0;      // utility of participating
  double Q_np = 0.0;     // utility of abstaining

  double alpha(PostType u) const {
    return u == PostType::Fake ? alpha_F : alpha_R;
  }
  // capacity ratio alpha_F / alpha_R; > 1 for valid params
  double capacity_ratio() const { return alpha_F / alpha_R; }
};

struct DesignTarget {
  double theta = 0.0;  // desired fraction flagging the fake post
  double delta = 0.0;  // tolerated fraction mis-flagging the real post
};

// (mu0, mu1, mu2): abstainers, capacity-only taggers, warning users.
// mu0 + mu1 + mu2 = 1 - mu_a within 1e-12.
struct PopulationProfile {
  double mu0 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
};

struct ParticipantFractions {
  double eta = 0.0;    // capacity-only taggers among participants
  double eta_a = 0.0;  // adversarial accounts among participants
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline constexpr double kProfileSumTol = 1e-12;

// Checks every constraint on (params, target); failures are listed by name,
// e.g. "delta <= alpha_R". Never throws.
ValidationReport validate_system(const SystemParams& params,
                                 const DesignTarget& target);

// Params-only subset of validate_system (no target constraints).
ValidationReport validate_params(const SystemParams& params);

bool profile_is_valid(const PopulationProfile& mu, double mu_a);

// eta = mu1 / (mu1 + mu2 + mu_a), eta_a = mu_a / (mu1 + mu2 + mu_a).
// Throws std::domain_error when nobody participates (mu1 + mu2 + mu_a = 0).
ParticipantFractions participant_fractions(const PopulationProfile& mu,
                                           double mu_a);

// omega(beta) = w^(1/b) * alpha_R^((1-a)/b) * beta^(1/b).
// Throws std::domain_error for beta < 0.
double warning_level(double beta, double w, double a, double b, double alpha_R);

// r(alpha, omega) = min{c * alpha^a * omega^b, 1}.
double response(double alpha, double omega, double a, double b, double c);

// Slope of the composed response r(alpha_u, omega(beta)) = min{m_u * beta, 1}:
// m_u = c * w * alpha_R * (alpha_u / alpha_R)^a. The b- and c-dependence
// cancels in the composition; tests assert the identity to 1e-12.
double effective_slope(PostType u, const SystemParams& params, double w);

// Adversary-adjusted success thresholds: (theta*(1-eta_a), delta*(1-eta_a)).
std::array<double, 2> success_thresholds(double theta, double delta,
                                         const ParticipantFractions& fr);

}  // namespace crowdtag
