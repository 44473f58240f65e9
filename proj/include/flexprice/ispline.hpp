#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace flexprice {

// Monotone price-response basis: seven cubic I-splines on [0,1], built as
// integrals of quadratic M-splines over the clamped knot vector below.
inline constexpr std::size_t kPriceBasisCount = 7;
inline constexpr std::array<double, 10> kPriceKnots{0.0, 0.0, 0.0, 0.2, 0.4,
                                                    0.6, 0.8, 1.0, 1.0, 1.0};

namespace detail {

// Order-k M-spline (degree k-1); integrates to 1 over its support.
inline double mspline(std::size_t j, int k, double x) noexcept {
  const auto& t = kPriceKnots;
  if (k == 1) {
    if (t[j + 1] <= t[j]) return 0.0;
    return (x >= t[j] && x < t[j + 1]) ? 1.0 / (t[j + 1] - t[j]) : 0.0;
  }
  const double den = t[j + static_cast<std::size_t>(k)] - t[j];
  if (den <= 0.0) return 0.0;
  const double left = (x - t[j]) * mspline(j, k - 1, x);
  const double right =
      (t[j + static_cast<std::size_t>(k)] - x) * mspline(j + 1, k - 1, x);
  return k * (left + right) / ((k - 1) * den);
}

}  // namespace detail

// I_j(u) = integral of the quadratic M-spline j from 0 to u. Two-point Gauss
// per knot span is exact for quadratics, so saturation values are exact too.
[[nodiscard]] inline double ispline(std::size_t j, double u) {
  if (j >= kPriceBasisCount) throw std::out_of_range("ispline: basis index");
  if (!(u >= 0.0 && u <= 1.0))
    throw std::domain_error("ispline: u outside [0,1]");
  const auto& t = kPriceKnots;
  if (u <= t[j]) return 0.0;
  if (u >= t[j + 3]) return 1.0;
  constexpr double kGaussOffset = 0.28867513459481287;  // 1/(2*sqrt(3))
  double acc = 0.0;
  for (std::size_t s = j; s + 1 < kPriceKnots.size() && t[s] < u; ++s) {
    const double lo = t[s];
    const double hi = (u < t[s + 1]) ? u : t[s + 1];
    if (hi <= lo) continue;
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    const double off = (hi - lo) * kGaussOffset;
    acc += half * (detail::mspline(j, 3, mid - off) +
                   detail::mspline(j, 3, mid + off));
  }
  return acc;
}

// One-based index variant matching the printed basis numbering Is_1..Is_7.
[[nodiscard]] inline double ispline_basis(double u, std::size_t j) {
  if (j < 1 || j > kPriceBasisCount)
    throw std::out_of_range("ispline_basis: j must be in 1..7");
  return ispline(j - 1, u);
}

[[nodiscard]] inline std::array<double, kPriceBasisCount> ispline_basis_all(
    double u) {
  std::array<double, kPriceBasisCount> out{};
  for (std::size_t j = 0; j < kPriceBasisCount; ++j) out[j] = ispline(j, u);
  return out;
}

}  // namespace flexprice
