#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexprice {

// Admissible set for one adaptive gain: hard bounds plus the boundary-layer
// width inside which updates are scaled toward zero.
struct ProjectionSpec {
  double theta_min = 0.0;
  double theta_max = 1.0 / 3.0;
  double epsilon = 0.03;

  [[nodiscard]] double midpoint() const noexcept {
    return 0.5 * (theta_min + theta_max);
  }
};

[[nodiscard]] inline std::vector<std::string> check(const ProjectionSpec& s,
                                                    const std::string& name) {
  std::vector<std::string> errs;
  if (!(s.theta_max > s.theta_min))
    errs.push_back(name + ": theta_max must exceed theta_min");
  if (!(s.epsilon > 0.0 && s.epsilon < 0.5 * (s.theta_max - s.theta_min)))
    errs.push_back(name + ": epsilon must satisfy 0 < eps < 0.5*(max-min)");
  return errs;
}

// Convex quadratic, zero at theta_min+eps and theta_max-eps, one at both hard
// bounds, negative strictly inside the projection-free zone.
[[nodiscard]] inline double h(double theta, const ProjectionSpec& s) noexcept {
  return (theta - s.theta_min - s.epsilon) * (theta - s.theta_max + s.epsilon) /
         ((s.theta_max - s.theta_min - s.epsilon) * s.epsilon);
}

[[nodiscard]] inline double h_prime(double theta,
                                    const ProjectionSpec& s) noexcept {
  return (2.0 * theta - s.theta_min - s.theta_max) /
         ((s.theta_max - s.theta_min - s.epsilon) * s.epsilon);
}

// Scales the update toward zero inside the boundary layer when it points
// outward; unchanged otherwise. Continuous in theta.
[[nodiscard]] inline double proj(double theta, double Y,
                                 const ProjectionSpec& s) noexcept {
  const double hv = h(theta, s);
  if (hv > 0.0 && Y * h_prime(theta, s) > 0.0) return Y - Y * hv;
  return Y;
}

struct IdealGains {
  double alpha_star = 0.0;
  double beta_star = 0.0;
  double zeta_star = 0.0;
};

// Gains that make the closed loop equal the reference model for known plant
// coefficients.
[[nodiscard]] inline IdealGains ideal_gains(double a, double b, double lambda,
                                            double C, double d_bar) {
  if (b == 0.0) throw std::domain_error("ideal_gains: b must be nonzero");
  return IdealGains{(lambda - a) / b, 1.0 / (b * C), -d_bar};
}

// Adaptive controller state: three projected gains, the reference-model
// state, and the hyperparameters that drive them.
struct AdaptiveState {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double zeta_hat = 0.0;
  double y_ref = 0.0;
  std::array<ProjectionSpec, 3> specs{};
  double gamma_alpha = 10.0;
  double gamma_beta = 10.0;
  double gamma_zeta = 10.0;
  double lambda = -1.0;  // reference-model pole, < 0
  int sign_b = -1;       // assumed sign of the price coefficient
};

[[nodiscard]] inline std::vector<std::string> check(const AdaptiveState& st) {
  std::vector<std::string> errs;
  const char* names[3] = {"alpha spec", "beta spec", "zeta spec"};
  for (std::size_t i = 0; i < 3; ++i) {
    auto e = check(st.specs[i], names[i]);
    errs.insert(errs.end(), e.begin(), e.end());
  }
  if (!(st.gamma_alpha > 0.0 && st.gamma_beta > 0.0 && st.gamma_zeta > 0.0))
    errs.push_back("adaptive: adaptation gains must be > 0");
  if (!(st.lambda < 0.0)) errs.push_back("adaptive: lambda must be < 0");
  if (st.sign_b != 1 && st.sign_b != -1)
    errs.push_back("adaptive: sign_b must be +1 or -1");
  return errs;
}

// One RK4 step of dy/dt = lambda*y + r/C with r held constant.
[[nodiscard]] inline double reference_step(double y, double r, double lambda,
                                           double C, double dt) {
  const auto fy = [&](double yy) { return lambda * yy + r / C; };
  const double k1 = fy(y);
  const double k2 = fy(y + 0.5 * dt * k1);
  const double k3 = fy(y + 0.5 * dt * k2);
  const double k4 = fy(y + dt * k3);
  return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// u = alpha_hat*x + beta_hat*r + zeta_hat, in exactly this expression order.
[[nodiscard]] inline double control(double x, double r,
                                    const AdaptiveState& st) noexcept {
  return st.alpha_hat * x + st.beta_hat * r + st.zeta_hat;
}

struct AdaptEvents {
  int projection_scaled = 0;  // channels whose update the projection altered
  int clipped = 0;            // channels clipped back to a hard bound
};

// Explicit-Euler update of the three gains with projected gradient drives
// -sign_b*(x,r,1)*e. Finite dt can overshoot a hard bound; such gains are
// clipped back and the event counted.
inline AdaptEvents adapt_step(AdaptiveState& st, double x, double r, double e,
                              double dt) {
  const double s = static_cast<double>(-st.sign_b);
  const std::array<double, 3> drive{s * x * e, s * r * e, s * e};
  const std::array<double, 3> gamma{st.gamma_alpha, st.gamma_beta,
                                    st.gamma_zeta};
  std::array<double*, 3> th{&st.alpha_hat, &st.beta_hat, &st.zeta_hat};
  AdaptEvents ev;
  for (std::size_t i = 0; i < 3; ++i) {
    const double projected = proj(*th[i], drive[i], st.specs[i]);
    if (projected != drive[i]) ++ev.projection_scaled;
    double next = *th[i] + gamma[i] * projected * dt;
    if (next < st.specs[i].theta_min) {
      next = st.specs[i].theta_min;
      ++ev.clipped;
    } else if (next > st.specs[i].theta_max) {
      next = st.specs[i].theta_max;
      ++ev.clipped;
    }
    *th[i] = next;
  }
  return ev;
}

// V = e^2/2 + |b|*sum(gain error^2 / (2*gamma)); instrumentation only.
[[nodiscard]] inline double lyapunov(double e, const AdaptiveState& st,
                                     const IdealGains& ideal, double b_abs) {
  const double at = st.alpha_hat - ideal.alpha_star;
  const double bt = st.beta_hat - ideal.beta_star;
  const double zt = st.zeta_hat - ideal.zeta_star;
  return 0.5 * e * e +
         b_abs * (at * at / (2.0 * st.gamma_alpha) +
                  bt * bt / (2.0 * st.gamma_beta) +
                  zt * zt / (2.0 * st.gamma_zeta));
}

// Offline state reconstruction from demand series: cumulative trapezoid of
// (D-B)/C from x0, clamped to [0,1] each sample.
[[nodiscard]] inline std::vector<double> reconstruct_state(
    const std::vector<double>& D_series, const std::vector<double>& B_series,
    double C, double dt, double x0 = 0.5) {
  if (D_series.size() != B_series.size())
    throw std::invalid_argument("reconstruct_state: series length mismatch");
  std::vector<double> x(D_series.size());
  if (x.empty()) return x;
  double cur = x0;
  if (cur < 0.0) cur = 0.0;
  if (cur > 1.0) cur = 1.0;
  x[0] = cur;
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double inc = 0.5 * dt *
                       ((D_series[k - 1] - B_series[k - 1]) +
                        (D_series[k] - B_series[k])) /
                       C;
    cur += inc;
    if (cur < 0.0) cur = 0.0;
    if (cur > 1.0) cur = 1.0;
    x[k] = cur;
  }
  return x;
}

}  // namespace flexprice
