#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexprice/flex_function.hpp"

namespace flexprice {

// Active piece of the piecewise LTV dynamics, from the sign of the demand
// change the current (x,u) would produce.
enum class Branch { negative = -1, zero = 0, positive = 1 };

// |lin_delta| at or below this counts as the zero branch.
inline constexpr double kBranchTieEpsilon = 1e-12;

// Slopes and biases of the linearized component functions plus capacity and
// flexible share. Sign constraints follow from f,g decreasing and ell
// increasing.
struct LinearParams {
  double eta1 = -1.0;    // slope of linearized f, < 0
  double eta2 = -0.9;    // slope of linearized g, < 0
  double eta3 = 1.0;     // slope of linearized ell, > 0
  double lambda1 = 0.5;  // bias of linearized f, > 0
  double lambda2 = 0.5;  // bias of linearized g, > 0
  double C = 2.97;       // capacity, > 0
  double Delta = 1.0;    // flexible demand share, in [0,1]

  [[nodiscard]] double lambda3() const noexcept { return lambda1 + lambda2; }
  // d_bar = lambda3/eta2, negative for valid parameters
  [[nodiscard]] double d_bar() const noexcept { return lambda3() / eta2; }
};

struct LtvCoefficients {
  double a = 0.0;  // state coefficient, < 0 off the zero branch
  double b = 0.0;  // price coefficient, < 0 off the zero branch
  double d = 0.0;  // bias
  Branch branch = Branch::zero;
};

[[nodiscard]] inline std::vector<std::string> check(const LinearParams& p) {
  std::vector<std::string> errs;
  if (!(p.eta1 < 0.0)) errs.push_back("linear: eta1 must be < 0");
  if (!(p.eta2 < 0.0)) errs.push_back("linear: eta2 must be < 0");
  if (!(p.eta3 > 0.0)) errs.push_back("linear: eta3 must be > 0");
  if (!(p.lambda1 > 0.0)) errs.push_back("linear: lambda1 must be > 0");
  if (!(p.lambda2 > 0.0)) errs.push_back("linear: lambda2 must be > 0");
  if (!(p.C > 0.0)) errs.push_back("linear: C must be > 0");
  if (!(p.Delta >= 0.0 && p.Delta <= 1.0))
    errs.push_back("linear: Delta must be in [0,1]");
  return errs;
}

inline void validate(const LinearParams& p) {
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

// Linearized demand change eta3*(eta1*x + eta2*u + lambda3); its sign picks
// the branch.
[[nodiscard]] inline double lin_delta(double x, double u,
                                      const LinearParams& p) noexcept {
  return p.eta3 * (p.eta1 * x + p.eta2 * u + p.lambda3());
}

[[nodiscard]] inline Branch branch_sign(double x, double u,
                                        const LinearParams& p) noexcept {
  const double z = lin_delta(x, u, p);
  if (z > kBranchTieEpsilon) return Branch::positive;
  if (z < -kBranchTieEpsilon) return Branch::negative;
  return Branch::zero;
}

// Coefficients under an assumed branch; controllers use this to resolve the
// branch/price circularity themselves.
[[nodiscard]] inline LtvCoefficients ltv_coeffs_for(Branch br, double B,
                                                    const LinearParams& p) {
  if (B < 0.0 || B > 1.0) throw std::domain_error("ltv_coeffs: B outside [0,1]");
  if (br == Branch::zero) return LtvCoefficients{0.0, 0.0, 0.0, Branch::zero};
  const double m = (br == Branch::positive) ? (1.0 - B) : B;
  const double scale = p.Delta / p.C * p.eta3 * m;
  return LtvCoefficients{scale * p.eta1, scale * p.eta2, scale * p.lambda3(),
                         br};
}

[[nodiscard]] inline LtvCoefficients ltv_coeffs(double x, double u, double B,
                                                const LinearParams& p) {
  return ltv_coeffs_for(branch_sign(x, u, p), B, p);
}

[[nodiscard]] inline double lin_drift(double x, double u, double B,
                                      const LinearParams& p) {
  const LtvCoefficients c = ltv_coeffs(x, u, B, p);
  return c.a * x + c.b * u + c.d;
}

// D = B + C*(a*x + b*u + d); shares lin_drift's rounding so the demand-drift
// identity D - B = C*dx/dt holds by construction.
[[nodiscard]] inline double lin_output(double x, double u, double B,
                                       const LinearParams& p) {
  return B + p.C * lin_drift(x, u, B, p);
}

// Slopes/biases of the component functions by central differences at a chosen
// operating point; the saturation bias is dropped to match the affine demand
// form used everywhere else.
[[nodiscard]] inline LinearParams linearize_from(const FlexParams& fp,
                                                 double x_op, double u_op) {
  constexpr double h = 1e-4;
  if (x_op < h || x_op > 1.0 - h)
    throw std::domain_error("linearize_from: x_op too close to boundary");
  if (u_op < h || u_op > 1.0 - h)
    throw std::domain_error("linearize_from: u_op too close to boundary");
  LinearParams lp;
  lp.eta1 = (f(x_op + h, fp) - f(x_op - h, fp)) / (2.0 * h);
  lp.eta2 = (g(u_op + h, fp) - g(u_op - h, fp)) / (2.0 * h);
  const double z_op = f(x_op, fp) + g(u_op, fp);
  lp.eta3 = (ell(z_op + h, fp.k) - ell(z_op - h, fp.k)) / (2.0 * h);
  lp.lambda1 = f(x_op, fp) - lp.eta1 * x_op;
  lp.lambda2 = g(u_op, fp) - lp.eta2 * u_op;
  lp.C = fp.C;
  lp.Delta = fp.Delta;
  validate(lp);
  return lp;
}

}  // namespace flexprice
