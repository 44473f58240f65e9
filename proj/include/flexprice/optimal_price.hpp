#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexprice/linear_flex.hpp"

namespace flexprice {

enum class PriceStatus { ok, no_consistent_branch, zero_branch };

struct PriceResult {
  double u = 0.0;
  Branch branch = Branch::zero;
  PriceStatus status = PriceStatus::ok;
};

// Inverts D = B + C(a x + b u + d) for u under each branch hypothesis and
// keeps the hypothesis its own price confirms. Output is unclamped.
// Dual consistency: the candidate closer to mid-price 0.5 wins. Zero
// consistency: if the zero-branch price (demand change 0) is self-consistent
// it is returned as zero_branch, otherwise the closer-to-0.5 candidate is
// returned flagged no_consistent_branch.
[[nodiscard]] inline PriceResult exact_price(double x, double B, double D_ref,
                                             const LinearParams& p) {
  std::array<PriceResult, 2> cand{};
  std::size_t n_consistent = 0;
  std::array<PriceResult, 2> all{};
  std::size_t n_all = 0;
  for (const Branch br : {Branch::positive, Branch::negative}) {
    const LtvCoefficients c = ltv_coeffs_for(br, B, p);
    if (c.b == 0.0) continue;  // degenerate baseline, branch unreachable
    const double u =
        (D_ref - B - p.C * c.a * x - p.C * c.d) / (p.C * c.b);
    const PriceResult r{u, br, PriceStatus::ok};
    all[n_all++] = r;
    if (branch_sign(x, u, p) == br) cand[n_consistent++] = r;
  }
  if (n_consistent == 1) return cand[0];
  if (n_consistent == 2) {
    return (std::abs(cand[0].u - 0.5) <= std::abs(cand[1].u - 0.5)) ? cand[0]
                                                                    : cand[1];
  }
  // zero-branch price: the u that zeroes the linearized demand change
  const double u_zero = -(p.eta1 * x + p.lambda3()) / p.eta2;
  if (branch_sign(x, u_zero, p) == Branch::zero)
    return PriceResult{u_zero, Branch::zero, PriceStatus::zero_branch};
  if (n_all == 0)
    return PriceResult{u_zero, Branch::zero, PriceStatus::no_consistent_branch};
  PriceResult best = all[0];
  for (std::size_t i = 1; i < n_all; ++i)
    if (std::abs(all[i].u - 0.5) < std::abs(best.u - 0.5)) best = all[i];
  best.status = PriceStatus::no_consistent_branch;
  return best;
}

[[nodiscard]] inline PriceResult clamped_price(double x, double B,
                                               double D_ref,
                                               const LinearParams& p) {
  PriceResult r = exact_price(x, B, D_ref, p);
  if (r.u < 0.0) r.u = 0.0;
  if (r.u > 1.0) r.u = 1.0;
  return r;
}

// Interval over which one constant price is optimized.
struct IntervalGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  int n_sub = 16;              // integration subintervals for the objective
  double u_resolution = 1e-6;  // bracket width at which the search stops
};

[[nodiscard]] inline std::vector<std::string> check(const IntervalGrid& g) {
  std::vector<std::string> errs;
  if (!(g.t_end > g.t_start)) errs.push_back("interval: t_end must exceed t_start");
  if (g.n_sub < 1) errs.push_back("interval: n_sub must be >= 1");
  if (!(g.u_resolution > 0.0 && g.u_resolution < 1.0))
    errs.push_back("interval: u_resolution must be in (0,1)");
  return errs;
}

// Squared demand mismatch integral for one constant price. Signals are
// sampled at each subinterval start and held; state follows the branch-
// resolved linear dynamics from x0 via RK4 on the (state, cost) pair.
template <class BFn, class DFn>
[[nodiscard]] double interval_objective(double u, double x0,
                                        const IntervalGrid& grid, BFn&& B,
                                        DFn&& D_ref, const LinearParams& p) {
  const double h = (grid.t_end - grid.t_start) / grid.n_sub;
  double x = x0;
  double J = 0.0;
  for (int i = 0; i < grid.n_sub; ++i) {
    const double t = grid.t_start + i * h;
    const double Bk = B(t);
    const double Dk = D_ref(t);
    const auto fx = [&](double xx) { return lin_drift(xx, u, Bk, p); };
    const auto fj = [&](double xx) {
      const double mis = lin_output(xx, u, Bk, p) - Dk;
      return mis * mis;
    };
    const double k1x = fx(x), k1j = fj(x);
    const double x2 = x + 0.5 * h * k1x;
    const double k2x = fx(x2), k2j = fj(x2);
    const double x3 = x + 0.5 * h * k2x;
    const double k3x = fx(x3), k3j = fj(x3);
    const double x4 = x + h * k3x;
    const double k4x = fx(x4), k4j = fj(x4);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    J += h / 6.0 * (k1j + 2.0 * k2j + 2.0 * k3j + k4j);
    if (x < 0.0) x = 0.0;
    if (x > 1.0) x = 1.0;
  }
  return J;
}

// Constant price in [0,1] minimizing the interval objective: 21-point scan
// (branch switches make the objective only piecewise smooth) then golden-
// section refinement; returns the best price actually evaluated so the
// result never loses to a probed point.
template <class BFn, class DFn>
[[nodiscard]] double optimal_price_interval(double x0, const IntervalGrid& grid,
                                            BFn&& B, DFn&& D_ref,
                                            const LinearParams& p) {
  const auto obj = [&](double u) {
    return interval_objective(u, x0, grid, B, D_ref, p);
  };
  constexpr int kScan = 21;
  double best_u = 0.0;
  double best_J = obj(0.0);
  int best_i = 0;
  for (int i = 1; i < kScan; ++i) {
    const double u = static_cast<double>(i) / (kScan - 1);
    const double J = obj(u);
    if (J < best_J) {
      best_J = J;
      best_u = u;
      best_i = i;
    }
  }
  double lo = (best_i > 0) ? static_cast<double>(best_i - 1) / (kScan - 1) : 0.0;
  double hi = (best_i < kScan - 1) ? static_cast<double>(best_i + 1) / (kScan - 1)
                                   : 1.0;
  const auto consider = [&](double u, double J) {
    if (J < best_J) {
      best_J = J;
      best_u = u;
    }
  };
  constexpr double kInvPhi = 0.6180339887498949;
  double u1 = hi - kInvPhi * (hi - lo);
  double u2 = lo + kInvPhi * (hi - lo);
  double J1 = obj(u1), J2 = obj(u2);
  consider(u1, J1);
  consider(u2, J2);
  while (hi - lo > grid.u_resolution) {
    if (J1 <= J2) {
      hi = u2;
      u2 = u1;
      J2 = J1;
      u1 = hi - kInvPhi * (hi - lo);
      J1 = obj(u1);
      consider(u1, J1);
    } else {
      lo = u1;
      u1 = u2;
      J1 = J2;
      u2 = lo + kInvPhi * (hi - lo);
      J2 = obj(u2);
      consider(u2, J2);
    }
  }
  return best_u;
}

}  // namespace flexprice
