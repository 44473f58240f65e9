#pragma once

#include <utility>

namespace flexprice {

// One integration step plus the [0,1] domain clamp; clamped reports whether
// the raw step left the domain.
struct StepResult {
  double value = 0.0;
  bool clamped = false;
};

namespace detail {

[[nodiscard]] inline StepResult clamp_unit(double x) noexcept {
  if (x < 0.0) return {0.0, true};
  if (x > 1.0) return {1.0, true};
  return {x, false};
}

}  // namespace detail

template <class F>
[[nodiscard]] StepResult step_euler(F&& f, double x, double dt) {
  return detail::clamp_unit(x + f(x) * dt);
}

template <class F>
[[nodiscard]] StepResult step_rk4(F&& f, double x, double dt) {
  const double k1 = f(x);
  const double k2 = f(x + 0.5 * dt * k1);
  const double k3 = f(x + 0.5 * dt * k2);
  const double k4 = f(x + dt * k3);
  return detail::clamp_unit(x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

// dW must already carry the sqrt(dt) scale.
template <class F, class G>
[[nodiscard]] StepResult step_euler_maruyama(F&& drift, G&& diff, double x,
                                             double dt, double dW) {
  return detail::clamp_unit(x + drift(x) * dt + diff(x) * dW);
}

}  // namespace flexprice
