#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexprice/adaptive_price.hpp"
#include "flexprice/flex_function.hpp"
#include "flexprice/integrate.hpp"
#include "flexprice/linear_flex.hpp"
#include "flexprice/optimal_price.hpp"
#include "flexprice/rng.hpp"
#include "flexprice/scenario.hpp"
#include "flexprice/trajectory.hpp"

namespace flexprice {

struct RunResult {
  Trajectory trajectory;
  RunMetrics summary;
  bool aborted = false;
  std::string abort_reason;
};

namespace detail {

[[nodiscard]] inline int branch_int(Branch b) noexcept {
  return static_cast<int>(b);
}

[[nodiscard]] inline int sign_with_tie(double v) noexcept {
  if (v > kBranchTieEpsilon) return 1;
  if (v < -kBranchTieEpsilon) return -1;
  return 0;
}

template <class F>
[[nodiscard]] StepResult do_step(Integrator integ, F&& f, double x,
                                 double dt) {
  if (integ == Integrator::euler) return step_euler(f, x, dt);
  return step_rk4(f, x, dt);
}

}  // namespace detail

// Known-parameter price generation on the linearized plant: exact price,
// clamped price, or one optimized constant price per interval. Signals and
// price are held constant across each dt step.
[[nodiscard]] inline RunResult run_procedure_1(const Scenario& sc) {
  const LinearParams& p = sc.linear;
  const long n = std::lround(sc.sim.horizon / sc.sim.dt);
  const double dt = sc.sim.dt;
  RunResult out;
  out.trajectory.dt = dt;
  out.trajectory.rows.reserve(static_cast<std::size_t>(n));
  double x = sc.x0;
  double prev_u = 0.5;
  int prev_branch = 0;
  double u_interval = 0.0;
  long next_opt_step = 0;
  long interval_index = 0;
  for (long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double Bk = sc.B(t);
    const double Dk = sc.D_ref(t);
    PriceResult pr;
    if (sc.controller == ControllerType::interval_optimal) {
      if (k == next_opt_step) {
        const double t_start = static_cast<double>(interval_index) *
                               sc.interval.length;
        double t_end = t_start + sc.interval.length;
        if (t_end > sc.sim.horizon) t_end = sc.sim.horizon;
        const IntervalGrid grid{t_start, t_end, sc.interval.n_sub,
                                sc.interval.u_resolution};
        u_interval = optimal_price_interval(x, grid, sc.B, sc.D_ref, p);
        ++interval_index;
        next_opt_step = std::lround(static_cast<double>(interval_index) *
                                    sc.interval.length / dt);
      }
      pr = PriceResult{u_interval, branch_sign(x, u_interval, p),
                       PriceStatus::ok};
    } else if (sc.controller == ControllerType::clamped) {
      pr = clamped_price(x, Bk, Dk, p);
    } else {
      pr = exact_price(x, Bk, Dk, p);
    }
    // on the zero branch demand equals B for any price; hold the last one
    const double u = (pr.status == PriceStatus::zero_branch && k > 0) ? prev_u
                                                                      : pr.u;
    const Branch br = branch_sign(x, u, p);
    const double delta = lin_delta(x, u, p);
    const double D = lin_output(x, u, Bk, p);
    const StepResult st = detail::do_step(
        sc.sim.integrator, [&](double xx) { return lin_drift(xx, u, Bk, p); },
        x, dt);
    TrajectoryRow row;
    row.time = t;
    row.x = x;
    row.D = D;
    row.D_ref = Dk;
    row.B = Bk;
    row.u = u;
    row.delta = delta;
    row.branch = detail::branch_int(br);
    row.clamp = st.clamped ? 1 : 0;
    row.branch_switch =
        (k > 0 && detail::branch_int(br) != prev_branch) ? 1 : 0;
    row.no_consistent_branch =
        (pr.status == PriceStatus::no_consistent_branch) ? 1 : 0;
    out.trajectory.rows.push_back(row);
    if (sc.sim.abort_on_error && pr.status != PriceStatus::ok) {
      out.aborted = true;
      out.abort_reason =
          (pr.status == PriceStatus::zero_branch)
              ? "zero branch requested at t=" + std::to_string(t)
              : "no consistent branch at t=" + std::to_string(t);
      break;
    }
    x = st.value;
    prev_u = u;
    prev_branch = detail::branch_int(br);
  }
  out.summary = metrics(out.trajectory);
  return out;
}

// Adaptive price generation: advance the reference, read or reconstruct the
// state, adapt the gains through the projection, then price and step the
// plant. Runs against the linearized, frozen-coefficient, or nonlinear plant.
[[nodiscard]] inline RunResult run_procedure_2(const Scenario& sc) {
  const long n = std::lround(sc.sim.horizon / sc.sim.dt);
  const double dt = sc.sim.dt;
  const double C = (sc.plant == PlantType::frozen)      ? sc.frozen_C
                   : (sc.plant == PlantType::nonlinear) ? sc.flex.C
                                                        : sc.linear.C;
  RunResult out;
  out.trajectory.dt = dt;
  out.trajectory.ref_lambda = sc.adaptive.lambda;
  out.trajectory.rows.reserve(static_cast<std::size_t>(n));

  AdaptiveState st;
  const auto init = sc.adaptive.initial_gains();
  st.alpha_hat = init[0];
  st.beta_hat = init[1];
  st.zeta_hat = init[2];
  st.y_ref = sc.adaptive.y0;
  st.specs = sc.adaptive.specs;
  st.gamma_alpha = sc.adaptive.gamma[0];
  st.gamma_beta = sc.adaptive.gamma[1];
  st.gamma_zeta = sc.adaptive.gamma[2];
  st.lambda = sc.adaptive.lambda;
  st.sign_b = sc.adaptive.sign_b;

  CounterRng rng(sc.sim.seed);
  double x = sc.x0;
  double x_rec = 0.5;  // demand-only mode starts from the documented default
  double prev_D = 0.0, prev_B = 0.0;
  bool have_prev_demand = false;
  std::size_t seg = 0;
  int prev_branch = 0;
  const bool reconstructed = sc.adaptive.state_source ==
                             AdaptiveSettings::StateSource::reconstructed;

  for (long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double Bk = sc.B(t);
    const double Dk = sc.D_ref(t);
    const double r = Dk - Bk;

    bool seg_jumped = false;
    if (sc.plant == PlantType::frozen) {
      while (seg + 1 < sc.segments.size() &&
             k >= std::lround(sc.segments[seg + 1].t_start / dt)) {
        ++seg;
        seg_jumped = true;
      }
    }

    st.y_ref = reference_step(st.y_ref, r, st.lambda, C, dt);
    if (reconstructed && have_prev_demand)
      x_rec = std::min(1.0, std::max(0.0, x_rec + dt * (prev_D - prev_B) / C));
    const double x_ctrl = reconstructed ? x_rec : x;
    const double e = x_ctrl - st.y_ref;
    const AdaptEvents ev = adapt_step(st, x_ctrl, r, e, dt);
    const double u = control(x_ctrl, r, st);

    double D = 0.0, delta = 0.0, V = 0.0;
    int branch = 0;
    StepResult step{};
    if (sc.plant == PlantType::frozen) {
      const FrozenSegment& s = sc.segments[seg];
      D = Bk + C * (s.a * x + s.b * u + s.d);
      delta = D - Bk;
      branch = detail::sign_with_tie(delta);
      const IdealGains ig = ideal_gains(s.a, s.b, st.lambda, C, s.d / s.b);
      V = lyapunov(e, st, ig, std::abs(s.b));
      step = detail::do_step(
          sc.sim.integrator,
          [&](double xx) { return s.a * xx + s.b * u + s.d; }, x, dt);
    } else if (sc.plant == PlantType::linear) {
      const LinearParams& p = sc.linear;
      const LtvCoefficients c = ltv_coeffs(x, u, Bk, p);
      D = lin_output(x, u, Bk, p);
      delta = lin_delta(x, u, p);
      branch = detail::branch_int(c.branch);
      // gain-error weighting needs b != 0; on the zero branch only the
      // tracking term is defined
      V = (c.b != 0.0)
              ? lyapunov(e, st,
                         ideal_gains(c.a, c.b, st.lambda, C, p.d_bar()),
                         std::abs(c.b))
              : 0.5 * e * e;
      step = detail::do_step(
          sc.sim.integrator,
          [&](double xx) { return lin_drift(xx, u, Bk, p); }, x, dt);
    } else {
      // spline domain bounds the applied price; raw u stays in the log
      const double u_app = std::min(1.0, std::max(0.0, u));
      const double dc = demand_change(x, u_app, sc.flex);
      D = expected_demand(Bk, dc, sc.flex.Delta);
      delta = dc;
      branch = detail::sign_with_tie(dc);
      V = 0.5 * e * e;  // no true coefficients exist for the nonlinear plant
      const auto fdrift = [&](double xx) {
        return drift(xx, u_app, Bk, sc.flex);
      };
      if (sc.sim.integrator == Integrator::euler_maruyama) {
        const double dW = std::sqrt(dt) * rng.normal();
        step = step_euler_maruyama(
            fdrift, [&](double xx) { return diffusion(xx, sc.flex.sigma_x); },
            x, dt, dW);
      } else {
        step = detail::do_step(sc.sim.integrator, fdrift, x, dt);
      }
    }

    TrajectoryRow row;
    row.time = t;
    row.x = x;
    row.y_ref = st.y_ref;
    row.D = D;
    row.D_ref = Dk;
    row.B = Bk;
    row.u = u;
    row.delta = delta;
    row.branch = branch;
    row.alpha_hat = st.alpha_hat;
    row.beta_hat = st.beta_hat;
    row.zeta_hat = st.zeta_hat;
    row.e = e;
    row.V = V;
    row.clamp = step.clamped ? 1 : 0;
    row.branch_switch =
        ((k > 0 && branch != prev_branch) || seg_jumped) ? 1 : 0;
    row.projection_active = ev.projection_scaled + ev.clipped;
    out.trajectory.rows.push_back(row);

    prev_D = D;
    prev_B = Bk;
    have_prev_demand = true;
    prev_branch = branch;
    x = step.value;
  }
  out.summary = metrics(out.trajectory);
  return out;
}

// Open-loop drive: the price signal is applied as-is; no controller state.
[[nodiscard]] inline RunResult run_open_loop(const Scenario& sc) {
  const long n = std::lround(sc.sim.horizon / sc.sim.dt);
  const double dt = sc.sim.dt;
  RunResult out;
  out.trajectory.dt = dt;
  out.trajectory.rows.reserve(static_cast<std::size_t>(n));
  CounterRng rng(sc.sim.seed);
  double x = sc.x0;
  int prev_branch = 0;
  for (long k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double Bk = sc.B(t);
    const double Dk = sc.D_ref(t);
    const double u = sc.price_signal(t);
    double D = 0.0, delta = 0.0;
    int branch = 0;
    StepResult step{};
    if (sc.plant == PlantType::nonlinear) {
      const double dc = demand_change(x, u, sc.flex);
      D = expected_demand(Bk, dc, sc.flex.Delta);
      delta = dc;
      branch = detail::sign_with_tie(dc);
      const auto fdrift = [&](double xx) { return drift(xx, u, Bk, sc.flex); };
      if (sc.sim.integrator == Integrator::euler_maruyama) {
        const double dW = std::sqrt(dt) * rng.normal();
        step = step_euler_maruyama(
            fdrift, [&](double xx) { return diffusion(xx, sc.flex.sigma_x); },
            x, dt, dW);
      } else {
        step = detail::do_step(sc.sim.integrator, fdrift, x, dt);
      }
    } else {
      const LinearParams& p = sc.linear;
      D = lin_output(x, u, Bk, p);
      delta = lin_delta(x, u, p);
      branch = detail::branch_int(branch_sign(x, u, p));
      step = detail::do_step(
          sc.sim.integrator, [&](double xx) { return lin_drift(xx, u, Bk, p); },
          x, dt);
    }
    TrajectoryRow row;
    row.time = t;
    row.x = x;
    row.D = D;
    row.D_ref = Dk;
    row.B = Bk;
    row.u = u;
    row.delta = delta;
    row.branch = branch;
    row.clamp = step.clamped ? 1 : 0;
    row.branch_switch = (k > 0 && branch != prev_branch) ? 1 : 0;
    out.trajectory.rows.push_back(row);
    prev_branch = branch;
    x = step.value;
  }
  out.summary = metrics(out.trajectory);
  return out;
}

[[nodiscard]] inline RunResult run_scenario(const Scenario& sc) {
  switch (sc.controller) {
    case ControllerType::exact:
    case ControllerType::clamped:
    case ControllerType::interval_optimal:
      return run_procedure_1(sc);
    case ControllerType::adaptive:
      return run_procedure_2(sc);
    case ControllerType::price:
      return run_open_loop(sc);
  }
  throw std::logic_error("run_scenario: unreachable controller type");
}

}  // namespace flexprice
