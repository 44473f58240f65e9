#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexprice/ispline.hpp"

namespace flexprice {

// State of charge; valid values live in [0,1].
using FlexState = double;

// Parameter set of the nonlinear flexibility function. The beta weights must
// be nonpositive so the price response g is non-increasing; the alpha profile
// must make the state response f non-increasing, checked on a grid.
struct FlexParams {
  double C = 1.0;                    // capacity, > 0
  double Delta = 1.0;                // flexible demand share, in [0,1]
  std::array<double, 4> alpha{};     // state-response polynomial coefficients
  std::array<double, 7> beta{};      // price-response spline weights, <= 0
  double k = 1.0;                    // saturation steepness, > 0
  double sigma_x = 0.0;              // process noise intensity, >= 0
  double sigma_y = 0.0;              // measurement noise std dev, >= 0
};

[[nodiscard]] inline double f(double x, const FlexParams& p) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("f: x outside [0,1]");
  const double s = 2.0 * x - 1.0;
  const double s2 = s * s;
  const double s6 = s2 * s2 * s2;
  return (1.0 - 2.0 * x + p.alpha[0] * (1.0 - s2)) *
         (p.alpha[1] + p.alpha[2] * s2 + p.alpha[3] * s6);
}

[[nodiscard]] inline double g(double u, const FlexParams& p) {
  if (u < 0.0 || u > 1.0) throw std::domain_error("g: u outside [0,1]");
  double acc = 0.0;
  for (std::size_t j = 0; j < kPriceBasisCount; ++j)
    acc += p.beta[j] * ispline(j, u);
  return acc;
}

// Saturation map, odd and strictly increasing with range (-1,1).
[[nodiscard]] inline double ell(double z, double k) {
  if (!(k > 0.0)) throw std::domain_error("ell: k must be positive");
  return -1.0 + 2.0 / (1.0 + std::exp(-k * z));
}

[[nodiscard]] inline std::vector<std::string> check(const FlexParams& p) {
  std::vector<std::string> errs;
  if (!(p.C > 0.0)) errs.push_back("flex: C must be > 0");
  if (!(p.Delta >= 0.0 && p.Delta <= 1.0))
    errs.push_back("flex: Delta must be in [0,1]");
  if (!(p.k > 0.0)) errs.push_back("flex: k must be > 0");
  if (!(p.sigma_x >= 0.0)) errs.push_back("flex: sigma_x must be >= 0");
  if (!(p.sigma_y >= 0.0)) errs.push_back("flex: sigma_y must be >= 0");
  for (std::size_t j = 0; j < p.beta.size(); ++j)
    if (!(p.beta[j] <= 0.0))
      errs.push_back("flex: beta[" + std::to_string(j + 1) +
                     "] must be <= 0");
  if (errs.empty()) {
    // 1000-point grid; 1e-12 slack tolerates pure rounding noise only
    constexpr int kGrid = 1000;
    double prev = f(0.0, p);
    for (int i = 1; i < kGrid; ++i) {
      const double cur = f(static_cast<double>(i) / (kGrid - 1), p);
      if (cur > prev + 1e-12) {
        errs.push_back("flex: f is not non-increasing on [0,1] (alpha)");
        break;
      }
      prev = cur;
    }
  }
  return errs;
}

inline void validate(const FlexParams& p) {
  const auto errs = check(p);
  if (!errs.empty()) {
    std::string joined;
    for (const auto& e : errs) {
      if (!joined.empty()) joined += "; ";
      joined += e;
    }
    throw std::invalid_argument(joined);
  }
}

// delta = ell(f(x) + g(u)); the signed fractional demand shift.
[[nodiscard]] inline double demand_change(double x, double u,
                                          const FlexParams& p) {
  return ell(f(x, p) + g(u, p), p.k);
}

// D = B + delta*Delta*((1-B) if delta>0, B if delta<0); B when delta=0.
[[nodiscard]] inline double expected_demand(double B, double delta,
                                            double Delta) {
  if (delta > 0.0) return B + delta * Delta * (1.0 - B);
  if (delta < 0.0) return B + delta * Delta * B;
  return B;
}

[[nodiscard]] inline double drift(double x, double u, double B,
                                  const FlexParams& p) {
  const double D = expected_demand(B, demand_change(x, u, p), p.Delta);
  return (D - B) / p.C;
}

// State noise vanishes at both boundaries, keeping X inside [0,1].
[[nodiscard]] inline double diffusion(double x, double sigma_x) noexcept {
  return x * (1.0 - x) * sigma_x;
}

[[nodiscard]] inline double observe(double D, double sigma_y,
                                    double noise_draw) noexcept {
  return D + sigma_y * noise_draw;
}

}  // namespace flexprice
