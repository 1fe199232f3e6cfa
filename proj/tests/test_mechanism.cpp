#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "attractor.hpp"
#include "mechanism.hpp"
#include "rng.hpp"
#include "support/test_util.hpp"

using namespace crowdtag;
namespace tu = testutil;
namespace c0 = testutil::c0;

namespace {

MechanismDesign c0_design() {
  auto outcome = choose_design(tu::c0_target(), tu::c0_params(), tu::c0_knobs());
  REQUIRE(designable(outcome));
  return std::get<MechanismDesign>(outcome);
}

}  // namespace

TEST_CASE("f_threshold") {
  CHECK(f_threshold(0.75, 0.28, tu::c0_params()) ==
        doctest::Approx(c0::f_value).epsilon(1e-12));

  SystemParams p2 = tu::c0_params();
  p2.alpha_R = 0.25;
  p2.alpha_F = 0.35;
  CHECK(f_threshold(0.75, 0.26, p2) ==
        doctest::Approx(0.49822745999808374).epsilon(1e-12));

  // theta = 1 collapses eta_star, leaving Delta_R^{-a}
  CHECK(f_threshold(1.0, 0.28, tu::c0_params()) ==
        doctest::Approx(std::pow(tu::c0_params().capacity_ratio(), -2.0))
            .epsilon(1e-12));
}

TEST_CASE("f_threshold boundary-degenerate denominator") {
  // delta_a = alpha_R * eta_star(theta) exactly
  SystemParams p = tu::c0_params();
  p.mu_a = 0.0;
  const double theta = 0.5;
  const double es = (1.0 - theta) / (1.0 - p.alpha_F);
  const double delta = p.alpha_R * es;  // delta_a = delta when mu_a = 0
  CHECK_THROWS_AS(f_threshold(theta, delta, p), std::domain_error);
}

TEST_CASE("kappa and K_delta") {
  const auto [kappa, K_delta] = kappa_Kdelta(0.28, tu::c0_params());
  CHECK(kappa == doctest::Approx(c0::kappa).epsilon(1e-12));
  CHECK(K_delta == doctest::Approx(c0::K_delta).epsilon(1e-12));

  const auto [k0, K0] = kappa_Kdelta(0.0, tu::c0_params());
  const double Da = std::pow(tu::c0_params().capacity_ratio(), 2.0);
  CHECK(k0 == doctest::Approx(-0.27 * Da).epsilon(1e-12));
  CHECK(K0 == doctest::Approx(k0 * k0).epsilon(1e-12));
}

TEST_CASE("theta_tilde branches") {
  SUBCASE("theta below f lifts to the quadratic root plus eps") {
    const auto res =
        theta_tilde(0.75, 0.28, tu::c0_params(), tu::c0_knobs());
    REQUIRE(std::holds_alternative<ThetaTildeResult>(res));
    const auto& t = std::get<ThetaTildeResult>(res);
    CHECK(t.value == doctest::Approx(c0::theta_tilde).epsilon(1e-12));
    CHECK(*t.theta_2 == doctest::Approx(c0::theta_2).epsilon(1e-12));
    CHECK(t.theta_star == doctest::Approx(c0::theta_star).epsilon(1e-12));
  }
  SUBCASE("theta above f is kept") {
    SystemParams p2 = tu::c0_params();
    p2.alpha_R = 0.25;
    p2.alpha_F = 0.35;
    const auto res = theta_tilde(0.75, 0.26, p2, {});
    REQUIRE(std::holds_alternative<ThetaTildeResult>(res));
    CHECK(std::get<ThetaTildeResult>(res).value == 0.75);
  }
  SUBCASE("theta <= f with K_delta < 0 is not designable") {
    SystemParams p;
    p.alpha_R = 0.4;
    p.alpha_F = 0.42;
    p.mu_a = 0.0;
    p.p = 0.3;
    p.a = 3.0;
    p.C_e = 1.0;
    p.Q_p = 1.0;
    p.Q_np = 0.5;
    REQUIRE(kappa_Kdelta(0.55, p)[1] < 0.0);
    REQUIRE(0.1 <= f_threshold(0.1, 0.55, p));
    const auto res = theta_tilde(0.1, 0.55, p, {});
    REQUIRE(std::holds_alternative<NotDesignable>(res));
    CHECK(std::get<NotDesignable>(res).reason ==
          NotDesignable::Reason::OutsideFeasibleRegion);
  }
  SUBCASE("explicit eps below the admissible floor is rejected") {
    DesignKnobs knobs;
    knobs.eps = 0.0;
    CHECK_THROWS_AS(theta_tilde(0.75, 0.28, tu::c0_params(), knobs),
                    std::invalid_argument);
  }
  SUBCASE("oversized explicit eps pins theta-tilde at 1") {
    DesignKnobs knobs;
    knobs.eps = 0.5;
    const auto res = theta_tilde(0.75, 0.28, tu::c0_params(), knobs);
    REQUIRE(std::holds_alternative<NotDesignable>(res));
    CHECK(std::get<NotDesignable>(res).reason ==
          NotDesignable::Reason::ThetaTildeEdge);
  }
}

TEST_CASE("w_interval at the worked example") {
  const auto [lo, hi] = w_interval(c0::theta_tilde, 0.28, tu::c0_params());
  CHECK(lo == doctest::Approx(c0::w_lo).epsilon(1e-12));
  CHECK(hi == doctest::Approx(c0::w_hi).epsilon(1e-12));

  // width is razor thin by construction
  CHECK(hi - lo == doctest::Approx(1.2983e-3).epsilon(1e-3));

  // when Delta_R^a * theta_tilde >= 1 the lower end collapses to 1/(1-mu_a)
  SystemParams p2 = tu::c0_params();
  p2.alpha_F = 0.4;
  const auto [lo2, hi2] = w_interval(0.9, 0.28, p2);
  CHECK(lo2 == doctest::Approx(1.0 / 0.9).epsilon(1e-12));
  CHECK(hi2 <= 1.0 / (0.28 * 0.9) + 1e-12);
}

TEST_CASE("choose_design reproduces the full-precision worked example") {
  const MechanismDesign d = c0_design();
  const double tol = 1e-12;
  CHECK(d.theta_tilde == doctest::Approx(c0::theta_tilde).epsilon(tol));
  CHECK(d.diag.cw_alpha_R == doctest::Approx(c0::cw_alpha_R).epsilon(tol));
  CHECK(d.w == doctest::Approx(c0::w).epsilon(tol));
  CHECK(d.diag.eta_bar == doctest::Approx(c0::eta_bar).epsilon(tol));
  CHECK(d.eta == doctest::Approx(c0::eta).epsilon(tol));
  CHECK(d.diag.eta_star_tilde ==
        doctest::Approx(c0::eta_star_tilde).epsilon(tol));
  CHECK(d.diag.gamma_lower == doctest::Approx(c0::gamma_lower).epsilon(tol));
  CHECK(d.gamma == doctest::Approx(c0::gamma).epsilon(tol));
  CHECK(d.R == doctest::Approx(c0::R).epsilon(tol));
  CHECK(d.diag.f_value == doctest::Approx(c0::f_value).epsilon(tol));
}

TEST_CASE("design invariants") {
  const MechanismDesign d = c0_design();
  CHECK(d.theta_tilde >= d.target.theta);
  CHECK(d.theta_tilde <= 1.0);
  CHECK(d.diag.cw_alpha_R > d.diag.w_lo);
  CHECK(d.diag.cw_alpha_R < d.diag.w_hi);
  CHECK(d.eta > d.diag.eta_bar);
  CHECK(d.eta <= d.diag.eta_star_tilde);
  CHECK(d.gamma > d.diag.gamma_lower);
  CHECK(d.R == doctest::Approx(d.params.C_e *
                               (1.0 - d.eta - d.params.mu_a +
                                1.0 / (d.gamma - 1.0)))
                   .epsilon(1e-14));
}

TEST_CASE("limit behaviour of gamma_lower and R") {
  SUBCASE("gamma_lower tends to 1 as p vanishes") {
    SystemParams p = tu::c0_params();
    p.p = 1e-9;
    const auto outcome = choose_design(tu::c0_target(), p, tu::c0_knobs());
    REQUIRE(designable(outcome));
    CHECK(std::get<MechanismDesign>(outcome).diag.gamma_lower ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("R tends to C_e*(1 - eta - mu_a) as gamma grows") {
    DesignKnobs knobs = tu::c0_knobs();
    knobs.gamma_margin = 1e9;
    const auto outcome = choose_design(tu::c0_target(), tu::c0_params(), knobs);
    REQUIRE(designable(outcome));
    const auto& d = std::get<MechanismDesign>(outcome);
    CHECK(d.R == doctest::Approx(1.0 - d.eta - 0.1).epsilon(1e-8));
  }
}

TEST_CASE("knob validation") {
  DesignKnobs knobs = tu::c0_knobs();
  SUBCASE("eps1 outside the interval") {
    knobs.eps1 = 1.0;  // interval width is ~1.3e-3
    CHECK_THROWS_AS(choose_design(tu::c0_target(), tu::c0_params(), knobs),
                    std::invalid_argument);
  }
  SUBCASE("eps2 outside the interval") {
    knobs.eps2 = 0.5;
    CHECK_THROWS_AS(choose_design(tu::c0_target(), tu::c0_params(), knobs),
                    std::invalid_argument);
  }
  SUBCASE("eps2 may sit exactly at the upper end") {
    const MechanismDesign base = c0_design();
    knobs.eps2 = base.diag.eta_star_tilde - base.diag.eta_bar;
    const auto outcome = choose_design(tu::c0_target(), tu::c0_params(), knobs);
    REQUIRE(designable(outcome));
    CHECK(std::get<MechanismDesign>(outcome).eta ==
          doctest::Approx(base.diag.eta_star_tilde).epsilon(1e-12));
  }
  SUBCASE("gamma_margin must be positive") {
    knobs.gamma_margin = 0.0;
    CHECK_THROWS_AS(choose_design(tu::c0_target(), tu::c0_params(), knobs),
                    std::invalid_argument);
  }
  SUBCASE("invalid system is rejected up front") {
    DesignTarget bad = tu::c0_target();
    bad.delta = 0.2;
    CHECK_THROWS_AS(choose_design(bad, tu::c0_params(), tu::c0_knobs()),
                    std::invalid_argument);
  }
}

TEST_CASE("theta-tilde and w-interval lemmas on random configurations") {
  SplitMix64 rng(81);
  int checked = 0;
  while (checked < 10000) {
    const SystemParams params = tu::random_params(rng);
    const DesignTarget target = tu::random_target(params, rng);
    if (!validate_system(params, target).ok()) continue;
    const auto res = theta_tilde(target.theta, target.delta, params, {});
    if (!std::holds_alternative<ThetaTildeResult>(res)) continue;
    const double tt = std::get<ThetaTildeResult>(res).value;
    CHECK(tt >= target.theta);
    if (tt >= 1.0) continue;
    const auto [lo, hi] = w_interval(tt, target.delta, params);
    CHECK(lo < hi);
    ++checked;
  }
}

TEST_CASE("designed mechanisms satisfy the equilibrium preconditions") {
  // Claim 1 (eta_bar < eta_star_tilde), Claim 2 (eta > x_R), and the
  // attractor inequalities that make the designed profile succeed
  SplitMix64 rng(91);
  int produced = 0;
  while (produced < 2000) {
    const SystemParams params = tu::random_params(rng);
    const DesignTarget target = tu::random_target(params, rng);
    if (!validate_system(params, target).ok()) continue;
    const auto outcome = choose_design(target, params, {});
    if (!designable(outcome)) continue;
    ++produced;
    const auto& d = std::get<MechanismDesign>(outcome);

    CHECK(d.diag.eta_bar < d.diag.eta_star_tilde);
    const double x_R =
        (1.0 - params.mu_a - 1.0 / d.diag.cw_alpha_R) / (1.0 - params.alpha_R);
    CHECK(d.eta > x_R);

    const ParticipantFractions fr{d.eta, params.mu_a};
    const double bF =
        attractor_closed_form(PostType::Fake, fr, params, d.w).beta_star;
    const double bR =
        attractor_closed_form(PostType::Real, fr, params, d.w).beta_star;
    CHECK(bF >= d.theta_tilde * (1.0 - params.mu_a) - 1e-12);
    CHECK(bR <= target.delta * (1.0 - params.mu_a) + 1e-12);
  }
}

TEST_CASE("design outputs do not depend on b and c") {
  SplitMix64 rng(101);
  for (int i = 0; i < 200; ++i) {
    SystemParams params = tu::random_params(rng);
    const DesignTarget target = tu::random_target(params, rng);
    if (!validate_system(params, target).ok()) continue;
    params.b = 1.0;
    params.c = 1.0;
    const auto base = choose_design(target, params, {});
    params.b = 2.7;
    params.c = 0.33;
    const auto varied = choose_design(target, params, {});
    REQUIRE(designable(base) == designable(varied));
    if (!designable(base)) continue;
    const auto& d0 = std::get<MechanismDesign>(base);
    const auto& d1 = std::get<MechanismDesign>(varied);
    CHECK(d1.diag.cw_alpha_R ==
          doctest::Approx(d0.diag.cw_alpha_R).epsilon(1e-12));
    CHECK(d1.eta == doctest::Approx(d0.eta).epsilon(1e-12));
    CHECK(d1.gamma == doctest::Approx(d0.gamma).epsilon(1e-12));
    CHECK(d1.R == doctest::Approx(d0.R).epsilon(1e-12));
    CHECK(d1.theta_tilde == doctest::Approx(d0.theta_tilde).epsilon(1e-12));
    // the algorithm fixes c*w*alpha_R, so w itself rescales by 1/c
    CHECK(d1.w * params.c ==
          doctest::Approx(d0.w * 1.0).epsilon(1e-12));
    // attractors are untouched
    const ParticipantFractions fr{d0.eta, params.mu_a};
    SystemParams p0 = params;
    p0.b = 1.0;
    p0.c = 1.0;
    CHECK(attractor_closed_form(PostType::Fake, fr, p0, d0.w).beta_star ==
          doctest::Approx(
              attractor_closed_form(PostType::Fake, fr, params, d1.w).beta_star)
              .epsilon(1e-12));
  }
}
