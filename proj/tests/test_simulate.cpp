#include <cmath>
#include <cstdlib>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "flexprice/flexprice.hpp"

using Catch::Matchers::WithinAbs;
using flexprice::ControllerType;
using flexprice::FrozenSegment;
using flexprice::Integrator;
using flexprice::PlantType;
using flexprice::RunResult;
using flexprice::Scenario;
using flexprice::SignalSpec;

namespace {

// Linear default plant, exact controller, one reference step at t = 1.
Scenario tracking_scenario() {
  Scenario sc;
  sc.plant = PlantType::linear;
  sc.controller = ControllerType::exact;
  sc.x0 = 0.5;
  sc.B = SignalSpec::constant(0.5);
  sc.D_ref = SignalSpec::piecewise({0.65, 0.3}, {1.0});
  sc.sim.dt = 1e-3;
  sc.sim.horizon = 2.0;
  return sc;
}

// Frozen single-segment plant matching the linearized defaults at B = 0.5.
Scenario frozen_scenario() {
  Scenario sc;
  sc.plant = PlantType::frozen;
  sc.controller = ControllerType::adaptive;
  sc.x0 = 0.2;
  sc.frozen_C = 2.97;
  sc.segments = {FrozenSegment{0.0, -0.16835016835016833,
                               -0.15151515151515149, 0.16835016835016833}};
  sc.adaptive.lambda = -1.0;
  sc.adaptive.gamma = {10.0, 10.0, 10.0};
  sc.adaptive.specs = {flexprice::ProjectionSpec{0.0, 9.0, 0.25},
                       flexprice::ProjectionSpec{-4.0, 0.0, 0.2},
                       flexprice::ProjectionSpec{0.0, 2.2, 0.1}};
  sc.adaptive.init = std::array<double, 3>{4.5, -2.0, 1.1};
  sc.adaptive.y0 = 0.2;
  sc.adaptive.sign_b = -1;
  sc.B = SignalSpec::constant(0.5);
  sc.D_ref = SignalSpec::constant(0.8);
  sc.sim.dt = 1e-3;
  sc.sim.horizon = 2.0;
  return sc;
}

}  // namespace

TEST_CASE("exact controller reproduces the reference demand step by step") {
  const Scenario sc = tracking_scenario();
  const RunResult res = flexprice::run_scenario(sc);
  REQUIRE(res.trajectory.rows.size() == 2000);
  CHECK_FALSE(res.aborted);

  // Time is the step index times dt, exactly.
  CHECK(res.trajectory.rows[0].time == 0.0);
  CHECK(res.trajectory.rows[777].time == 777 * 1e-3);
  CHECK(res.trajectory.rows[1999].time == 1999 * 1e-3);

  // Collect switch rows, then require exact tracking away from them.
  std::vector<long> switches;
  for (std::size_t k = 0; k < res.trajectory.rows.size(); ++k)
    if (res.trajectory.rows[k].branch_switch)
      switches.push_back(static_cast<long>(k));
  REQUIRE(switches.size() == 1);  // the single reference step
  for (std::size_t k = 0; k < res.trajectory.rows.size(); ++k) {
    bool near_switch = false;
    for (long s : switches)
      if (std::labs(static_cast<long>(k) - s) <= 2) near_switch = true;
    if (near_switch) continue;
    const auto& r = res.trajectory.rows[k];
    CHECK_THAT(r.D, WithinAbs(r.D_ref, 1e-6));
  }
  CHECK(res.summary.no_branch_events == 0);
  CHECK(res.summary.clamp_events == 0);
}

TEST_CASE("clamped controller never leaves the unit price interval") {
  Scenario sc = tracking_scenario();
  sc.controller = ControllerType::clamped;
  // An extreme reference drives the exact price out of [0,1].
  sc.D_ref = flexprice::SignalSpec::piecewise({0.95, 0.05}, {1.0});
  const RunResult res = flexprice::run_scenario(sc);
  for (const auto& r : res.trajectory.rows) {
    CHECK(r.u >= 0.0);
    CHECK(r.u <= 1.0);
  }
  CHECK(res.summary.u_bound_violations == 0);

  Scenario se = sc;
  se.controller = ControllerType::exact;
  const RunResult unclamped = flexprice::run_scenario(se);
  CHECK(unclamped.summary.u_bound_violations > 0);
}

TEST_CASE("interval controller holds one price per interval") {
  Scenario sc = tracking_scenario();
  sc.controller = ControllerType::interval_optimal;
  sc.interval.length = 1.0;
  const RunResult res = flexprice::run_scenario(sc);
  REQUIRE(res.trajectory.rows.size() == 2000);
  const double u0 = res.trajectory.rows[0].u;
  const double u1 = res.trajectory.rows[1000].u;
  for (std::size_t k = 0; k < 1000; ++k)
    CHECK(res.trajectory.rows[k].u == u0);
  for (std::size_t k = 1000; k < 2000; ++k)
    CHECK(res.trajectory.rows[k].u == u1);
  CHECK(u0 != u1);  // the reference step forces a different optimum

  // First interval price agrees with a direct optimization call.
  const flexprice::IntervalGrid grid{0.0, 1.0, sc.interval.n_sub,
                                     sc.interval.u_resolution};
  const double direct =
      flexprice::optimal_price_interval(sc.x0, grid, sc.B, sc.D_ref, sc.linear);
  CHECK(res.trajectory.rows[0].u == direct);
}

TEST_CASE("matched reference demand settles on the zero branch") {
  Scenario sc = tracking_scenario();
  sc.D_ref = SignalSpec::constant(0.5);  // equal to B: nothing to shift
  sc.sim.horizon = 0.5;
  const RunResult res = flexprice::run_scenario(sc);
  REQUIRE(res.trajectory.rows.size() == 500);
  // The zero-branch price is held for the whole run and demand stays at B.
  const double u_zero =
      -(sc.linear.eta1 * sc.x0 + sc.linear.lambda3()) / sc.linear.eta2;
  for (const auto& r : res.trajectory.rows) {
    CHECK(r.u == u_zero);
    CHECK_THAT(r.D, WithinAbs(0.5, 1e-12));
    CHECK(r.branch == 0);
  }

  // With abort_on_error the first zero-branch step ends the run.
  sc.sim.abort_on_error = true;
  const RunResult ab = flexprice::run_scenario(sc);
  CHECK(ab.aborted);
  CHECK(ab.trajectory.rows.size() == 1);
  CHECK(ab.abort_reason.find("zero branch") != std::string::npos);
}

TEST_CASE("reruns are bitwise identical") {
  const Scenario sc = frozen_scenario();
  const RunResult a = flexprice::run_scenario(sc);
  const RunResult b = flexprice::run_scenario(sc);
  CHECK(flexprice::to_csv(a.trajectory) == flexprice::to_csv(b.trajectory));
}

TEST_CASE("adaptive loop logs the post-update reference and gains") {
  Scenario sc = frozen_scenario();
  sc.sim.horizon = sc.sim.dt;  // a single step
  const RunResult res = flexprice::run_scenario(sc);
  REQUIRE(res.trajectory.rows.size() == 1);
  const auto& row = res.trajectory.rows[0];

  // Reproduce the first loop iteration by hand.
  const double r = 0.8 - 0.5;
  const double y1 = flexprice::reference_step(sc.adaptive.y0, r,
                                              sc.adaptive.lambda, sc.frozen_C,
                                              sc.sim.dt);
  CHECK(row.y_ref == y1);
  const double e = sc.x0 - y1;
  CHECK(row.e == e);

  flexprice::AdaptiveState st;
  st.alpha_hat = (*sc.adaptive.init)[0];
  st.beta_hat = (*sc.adaptive.init)[1];
  st.zeta_hat = (*sc.adaptive.init)[2];
  st.specs = sc.adaptive.specs;
  st.gamma_alpha = st.gamma_beta = st.gamma_zeta = 10.0;
  st.lambda = sc.adaptive.lambda;
  st.sign_b = -1;
  (void)flexprice::adapt_step(st, sc.x0, r, e, sc.sim.dt);
  CHECK(row.alpha_hat == st.alpha_hat);
  CHECK(row.beta_hat == st.beta_hat);
  CHECK(row.zeta_hat == st.zeta_hat);
  const double u = flexprice::control(sc.x0, r, st);
  CHECK(row.u == u);

  // Demand is evaluated on the frozen coefficients at the incoming state.
  const FrozenSegment& s = sc.segments[0];
  CHECK(row.D == 0.5 + sc.frozen_C * (s.a * sc.x0 + s.b * u + s.d));
  CHECK(row.x == sc.x0);
}

TEST_CASE("ideal initial gains keep the loop on the reference model") {
  Scenario sc = frozen_scenario();
  const FrozenSegment& s = sc.segments[0];
  const flexprice::IdealGains ig = flexprice::ideal_gains(
      s.a, s.b, sc.adaptive.lambda, sc.frozen_C, s.d / s.b);
  sc.adaptive.init = std::array<double, 3>{ig.alpha_star, ig.beta_star,
                                           ig.zeta_star};
  const RunResult res = flexprice::run_scenario(sc);
  // Starting exactly on the model, the error stays at discretization level
  // and adaptation barely moves the gains.
  for (const auto& r : res.trajectory.rows) CHECK(std::abs(r.e) <= 5e-4);
  CHECK(std::abs(res.summary.final_alpha - ig.alpha_star) <= 2e-2);
  CHECK(std::abs(res.summary.final_beta - ig.beta_star) <= 2e-2);
  CHECK(std::abs(res.summary.final_zeta - ig.zeta_star) <= 2e-2);
  CHECK(res.summary.lyapunov_ascents == 0);
}

TEST_CASE("state source selects true or demand-reconstructed state") {
  Scenario sc = frozen_scenario();
  sc.x0 = 0.9;  // reconstruction starts from 0.5 regardless
  const RunResult direct = flexprice::run_scenario(sc);
  sc.adaptive.state_source =
      flexprice::AdaptiveSettings::StateSource::reconstructed;
  const RunResult rec = flexprice::run_scenario(sc);
  CHECK(direct.trajectory.rows[0].u != rec.trajectory.rows[0].u);
  // Both log the true plant state.
  CHECK(direct.trajectory.rows[0].x == 0.9);
  CHECK(rec.trajectory.rows[0].x == 0.9);
  // The reconstructed loop still settles: the error stays bounded.
  CHECK(rec.summary.max_abs_e < 0.5);
}

TEST_CASE("open loop applies the price signal to both plant kinds") {
  Scenario sc;
  sc.plant = PlantType::nonlinear;
  sc.controller = ControllerType::price;
  sc.flex.C = 2.97;
  sc.flex.alpha = {0.1, 1.0, 0.5, 0.2};
  sc.flex.beta = {0.0, -0.1, -0.15, -0.2, -0.2, -0.15, -0.1};
  sc.flex.k = 2.0;
  sc.price_signal = SignalSpec::constant(0.3);
  sc.sim.horizon = 1.0;
  const RunResult res = flexprice::run_scenario(sc);
  REQUIRE(res.trajectory.rows.size() == 1000);
  for (const auto& r : res.trajectory.rows) CHECK(r.u == 0.3);

  // Without noise the stochastic integrator collapses onto plain Euler.
  Scenario se = sc;
  se.sim.integrator = Integrator::euler;
  Scenario sm = sc;
  sm.sim.integrator = Integrator::euler_maruyama;
  sm.flex.sigma_x = 0.0;
  const RunResult re = flexprice::run_scenario(se);
  const RunResult rm = flexprice::run_scenario(sm);
  CHECK(flexprice::to_csv(re.trajectory) == flexprice::to_csv(rm.trajectory));

  // With noise, different seeds give different paths.
  Scenario sn = sc;
  sn.sim.integrator = Integrator::euler_maruyama;
  sn.flex.sigma_x = 0.1;
  Scenario sn2 = sn;
  sn2.sim.seed = 2;
  const RunResult rn = flexprice::run_scenario(sn);
  const RunResult rn2 = flexprice::run_scenario(sn2);
  CHECK(flexprice::to_csv(rn.trajectory) != flexprice::to_csv(rn2.trajectory));
}

TEST_CASE("rk4 and halved-dt runs agree on the smooth segment") {
  Scenario sc = tracking_scenario();
  sc.D_ref = SignalSpec::constant(0.65);
  sc.sim.horizon = 1.0;
  const RunResult coarse = flexprice::run_scenario(sc);
  sc.sim.dt = 5e-4;
  const RunResult fine = flexprice::run_scenario(sc);
  // Same physical time, indices 1:2. The price is held constant across each
  // step, which makes the closed loop first order in dt; the two solutions
  // agree to O(dt), a few 1e-6 here.
  const double x_c = coarse.trajectory.rows[998].x;
  const double x_f = fine.trajectory.rows[1996].x;
  CHECK_THAT(x_c, WithinAbs(x_f, 5e-6));
}
