#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "attractor.hpp"
#include "rng.hpp"
#include "support/test_util.hpp"

using namespace crowdtag;
namespace tu = testutil;

namespace {

// worked-example inputs, rounded as commonly quoted: c*w*alpha_R = 1.1263940
const double kW = 1.1263940 / 0.27;
const ParticipantFractions kFr{0.2540343, 0.1};

}  // namespace

TEST_CASE("ode_rhs at hand-checked points") {
  auto params = tu::c0_params();
  const ParticipantFractions fr{0.254, 0.1};
  CHECK(ode_rhs(PostType::Real, 0.0, fr, params, kW) ==
        doctest::Approx(0.06858).epsilon(1e-12));
  // response clipped at 1 for beta = 1 (m_F > 1)
  CHECK(ode_rhs(PostType::Fake, 1.0, fr, params, kW) ==
        doctest::Approx(-0.2778).epsilon(1e-12));
  CHECK_THROWS_AS(ode_rhs(PostType::Real, -0.1, fr, params, kW),
                  std::domain_error);
}

TEST_CASE("drift vanishes at the closed-form attractor") {
  SplitMix64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    const SystemParams params = tu::random_params(rng);
    const auto [fr, w] = tu::random_fr_w(params, rng);
    for (PostType u : {PostType::Fake, PostType::Real}) {
      const auto res = attractor_closed_form(u, fr, params, w);
      CHECK(res.beta_star >= 0.0);
      CHECK(res.beta_star <= 1.0);
      CHECK(ode_rhs(u, res.beta_star, fr, params, w) ==
            doctest::Approx(0.0).epsilon(1e-12));
      // regime tag is consistent with the saturation threshold 1/m
      const double s = 1.0 / effective_slope(u, params, w);
      if (res.regime == Regime::Saturated) {
        CHECK(res.beta_star == res.rho_bar);
        CHECK(res.beta_star >= s - 1e-12);
      } else {
        CHECK(res.rho > 0.0);
        CHECK(res.beta_star < s);
      }
    }
  }
}

TEST_CASE("closed form at the worked-example design point") {
  auto params = tu::c0_params();

  const auto f = attractor_closed_form(PostType::Fake, kFr, params, kW);
  CHECK(f.regime == Regime::Saturated);
  CHECK(f.beta_star == doctest::Approx(0.722175990).epsilon(1e-9));
  CHECK(f.rho == doctest::Approx(0.10171371767185).epsilon(1e-9));

  const auto r = attractor_closed_form(PostType::Real, kFr, params, kW);
  CHECK(r.regime == Regime::Interior);
  CHECK(r.rho == doctest::Approx(0.27238811131420).epsilon(1e-9));
  CHECK(r.beta_star == doctest::Approx(0.25180710225962).epsilon(1e-9));
}

TEST_CASE("all capacity-only participants: limit is alpha_u * (1 - mu_a)") {
  auto params = tu::c0_params();
  const ParticipantFractions fr{0.9, 0.1};
  CHECK(attractor_closed_form(PostType::Real, fr, params, kW).beta_star ==
        doctest::Approx(0.243).epsilon(1e-12));
  CHECK(attractor_closed_form(PostType::Fake, fr, params, kW).beta_star ==
        doctest::Approx(0.27).epsilon(1e-12));
}

TEST_CASE("regime tie rho_bar = 1/m gives the same beta on both branches") {
  // exactly representable tie: alpha_R = 1/4, eta = 1/2, eta_a = 1/8, m = 2
  // => rho_bar = 1/8 + 3/8 = 1/2 = 1/m, rho = 1 - 3/8 * 2 = 1/4
  SystemParams params = tu::c0_params();
  params.alpha_R = 0.25;
  params.alpha_F = 0.5;
  params.c = 1.0;
  const ParticipantFractions fr{0.5, 0.125};
  const double w = 8.0;  // c*w*alpha_R = 2 = m_R
  const auto res = attractor_closed_form(PostType::Real, fr, params, w);
  CHECK(res.rho_bar == 0.5);
  CHECK(res.rho == 0.25);
  CHECK(res.regime == Regime::Saturated);
  CHECK(res.beta_star == 0.5);
  // the interior branch lands on the same point
  CHECK(params.alpha_R * fr.eta / res.rho == 0.5);
}

TEST_CASE("bisection agrees with the closed form") {
  SplitMix64 rng(31);
  for (int i = 0; i < 10000; ++i) {
    const SystemParams params = tu::random_params(rng);
    const auto [fr, w] = tu::random_fr_w(params, rng);
    const PostType u = (i % 2 == 0) ? PostType::Fake : PostType::Real;
    const double closed = attractor_closed_form(u, fr, params, w).beta_star;
    const double bisected = attractor_bisection(u, fr, params, w, 1e-12);
    CHECK(std::abs(closed - bisected) < 1e-9);
  }
}

TEST_CASE("bisection edge cases") {
  auto params = tu::c0_params();
  CHECK(attractor_bisection(PostType::Fake, kFr, params, kW, 1e-12) ==
        doctest::Approx(0.722175990).epsilon(1e-9));
  CHECK(attractor_bisection(PostType::Real, {0.0, 1.0}, params, kW, 1e-12) ==
        doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(
      attractor_bisection(PostType::Real, kFr, params, kW, 0.0),
      std::invalid_argument);
}

TEST_CASE("the drift has exactly one zero on [0,1]") {
  SplitMix64 rng(41);
  for (int cfg = 0; cfg < 200; ++cfg) {
    const SystemParams params = tu::random_params(rng);
    const auto [fr, w] = tu::random_fr_w(params, rng);
    for (PostType u : {PostType::Fake, PostType::Real}) {
      int sign_changes = 0;
      double prev = ode_rhs(u, 0.0, fr, params, w);
      for (int i = 1; i <= 10000; ++i) {
        const double beta = static_cast<double>(i) / 10000.0;
        const double g = ode_rhs(u, beta, fr, params, w);
        if ((prev > 0.0 && g < 0.0) || (prev < 0.0 && g > 0.0)) ++sign_changes;
        if (g != 0.0) prev = g;
      }
      CHECK(sign_changes <= 1);
    }
  }
}

TEST_CASE("trajectory from the fixed point stays put") {
  auto params = tu::c0_params();
  const auto res = attractor_closed_form(PostType::Real, kFr, params, kW);
  const std::array<double, 4> grid{0.0, 1.0, 10.0, 100.0};
  for (auto [t, beta] : ode_trajectory(PostType::Real, res.beta_star, kFr,
                                       params, kW, grid))
    CHECK(beta == doctest::Approx(res.beta_star).epsilon(1e-12));
}

TEST_CASE("trajectory relaxation at the worked-example point") {
  auto params = tu::c0_params();
  const double target = 0.25180710225962;
  const std::array<double, 2> grid{20.0, 100.0};
  const auto traj =
      ode_trajectory(PostType::Real, 0.0, kFr, params, kW, grid);
  // remaining gap is e^{-rho t} times the initial gap
  CHECK(std::abs(traj[0].second - target) < 1.2e-3);
  CHECK(std::abs(traj[1].second - target) < 1e-8);
}

TEST_CASE("trajectory from beta0 = 1 decreases monotonically to the attractor") {
  auto params = tu::c0_params();
  std::vector<double> grid;
  for (int i = 0; i <= 400; ++i) grid.push_back(i * 0.5);
  for (PostType u : {PostType::Fake, PostType::Real}) {
    const auto traj = ode_trajectory(u, 1.0, kFr, params, kW, grid);
    for (std::size_t i = 1; i < traj.size(); ++i)
      CHECK(traj[i].second <= traj[i - 1].second + 1e-15);
    const double beta_star = attractor_closed_form(u, kFr, params, kW).beta_star;
    CHECK(traj.back().second == doctest::Approx(beta_star).epsilon(1e-9));
  }
}

TEST_CASE("every start in [0,1] converges to the same limit by t = 200") {
  SplitMix64 rng(51);
  const std::array<double, 1> grid{200.0};
  int checked = 0;
  while (checked < 500) {
    const SystemParams params = tu::random_params(rng);
    const auto [fr, w] = tu::random_fr_w(params, rng);
    for (PostType u : {PostType::Fake, PostType::Real}) {
      if (!tu::converges_fast_by_200(u, fr, params, w)) continue;
      ++checked;
      const double beta_star = attractor_closed_form(u, fr, params, w).beta_star;
      for (double beta0 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto traj = ode_trajectory(u, beta0, fr, params, w, grid);
        CHECK(std::abs(traj[0].second - beta_star) < 1e-6);
      }
    }
  }
}

TEST_CASE("exact trajectory matches a Runge-Kutta reference") {
  SplitMix64 rng(61);
  const std::array<double, 3> grid{0.5, 2.0, 8.0};
  for (int cfg = 0; cfg < 25; ++cfg) {
    const SystemParams params = tu::random_params(rng);
    const auto [fr, w] = tu::random_fr_w(params, rng);
    const double beta0 = rng.next_double();
    for (PostType u : {PostType::Fake, PostType::Real}) {
      const auto traj = ode_trajectory(u, beta0, fr, params, w, grid);
      for (auto [t, beta] : traj) {
        const double ref = tu::rk4_beta(u, beta0, fr, params, w, t);
        CHECK(beta == doctest::Approx(ref).epsilon(5e-6));
      }
    }
  }
}

TEST_CASE("attractor is strictly decreasing in the capacity-only share") {
  // mu_x = (0, x, 1-x-mu_a) profiles; the designed warning always has
  // c*w*alpha_R > 1/(1-mu_a), which is what makes the map strictly monotone
  SplitMix64 rng(71);
  for (int cfg = 0; cfg < 100; ++cfg) {
    const SystemParams params = tu::random_params(rng);
    const double w =
        tu::uniform(rng, 1.0 / (1.0 - params.mu_a) + 0.05, 3.0) /
        (params.c * params.alpha_R);
    for (PostType u : {PostType::Fake, PostType::Real}) {
      double prev = 2.0;
      for (int i = 1; i <= 40; ++i) {
        const double x = (1.0 - params.mu_a) * i / 41.0;
        const ParticipantFractions fr{x, params.mu_a};
        const double beta = attractor_closed_form(u, fr, params, w).beta_star;
        if (prev <= 1.0) CHECK(beta < prev);
        prev = beta;
      }
    }
  }
}
