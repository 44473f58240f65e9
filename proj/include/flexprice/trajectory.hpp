#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexprice {

// One logged simulation step. x is the state entering the step; y_ref, gains,
// e and V are the values used to form that step's price. Event flags are
// 0/1 except projection_active, which counts affected gain channels (0..3).
struct TrajectoryRow {
  double time = 0.0;
  double x = 0.0;
  double y_ref = 0.0;
  double D = 0.0;
  double D_ref = 0.0;
  double B = 0.0;
  double u = 0.0;
  double delta = 0.0;
  int branch = 0;  // sign of delta: -1, 0, +1
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double zeta_hat = 0.0;
  double e = 0.0;
  double V = 0.0;
  int clamp = 0;
  int branch_switch = 0;
  int projection_active = 0;
  int no_consistent_branch = 0;
};

inline constexpr const char* kTrajectoryCsvHeader =
    "time,x,y_ref,D,D_ref,B,u,delta,branch,alpha_hat,beta_hat,zeta_hat,e,V,"
    "clamp,branch_switch,projection_active,no_consistent_branch";

struct Trajectory {
  double dt = 0.0;
  double ref_lambda = 0.0;  // reference-model pole; 0 when not adaptive
  std::vector<TrajectoryRow> rows;
};

namespace detail {

// %.17g round-trips doubles exactly; keeps reruns byte-identical
inline void append_g17(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace detail

[[nodiscard]] inline std::string to_csv(const Trajectory& tr) {
  std::string out = kTrajectoryCsvHeader;
  out += '\n';
  for (const TrajectoryRow& r : tr.rows) {
    detail::append_g17(out, r.time);
    out += ',';
    detail::append_g17(out, r.x);
    out += ',';
    detail::append_g17(out, r.y_ref);
    out += ',';
    detail::append_g17(out, r.D);
    out += ',';
    detail::append_g17(out, r.D_ref);
    out += ',';
    detail::append_g17(out, r.B);
    out += ',';
    detail::append_g17(out, r.u);
    out += ',';
    detail::append_g17(out, r.delta);
    out += ',';
    out += std::to_string(r.branch);
    out += ',';
    detail::append_g17(out, r.alpha_hat);
    out += ',';
    detail::append_g17(out, r.beta_hat);
    out += ',';
    detail::append_g17(out, r.zeta_hat);
    out += ',';
    detail::append_g17(out, r.e);
    out += ',';
    detail::append_g17(out, r.V);
    out += ',';
    out += std::to_string(r.clamp);
    out += ',';
    out += std::to_string(r.branch_switch);
    out += ',';
    out += std::to_string(r.projection_active);
    out += ',';
    out += std::to_string(r.no_consistent_branch);
    out += '\n';
  }
  return out;
}

inline void write_csv(std::ostream& os, const Trajectory& tr) {
  os << to_csv(tr);
}

struct RunMetrics {
  double rmse_demand = 0.0;
  double max_abs_e = 0.0;
  long u_bound_violations = 0;
  long lyapunov_ascents = 0;  // steps with dV beyond lambda*e^2*dt + 10*dt^2
  long clamp_events = 0;
  long switch_events = 0;
  long projection_events = 0;
  long no_branch_events = 0;
  double final_alpha = 0.0;
  double final_beta = 0.0;
  double final_zeta = 0.0;
};

[[nodiscard]] inline RunMetrics metrics(const Trajectory& tr) {
  if (tr.rows.empty()) throw std::invalid_argument("metrics: empty trajectory");
  RunMetrics m;
  double sq = 0.0;
  for (std::size_t k = 0; k < tr.rows.size(); ++k) {
    const TrajectoryRow& r = tr.rows[k];
    const double mis = r.D - r.D_ref;
    sq += mis * mis;
    if (std::abs(r.e) > m.max_abs_e) m.max_abs_e = std::abs(r.e);
    if (r.u < 0.0 || r.u > 1.0) ++m.u_bound_violations;
    m.clamp_events += r.clamp;
    m.switch_events += r.branch_switch;
    m.projection_events += r.projection_active;
    m.no_branch_events += r.no_consistent_branch;
    if (k > 0 && tr.dt > 0.0) {
      const TrajectoryRow& q = tr.rows[k - 1];
      const double bound =
          tr.ref_lambda * q.e * q.e * tr.dt + 10.0 * tr.dt * tr.dt;
      if (r.V - q.V > bound) ++m.lyapunov_ascents;
    }
  }
  m.rmse_demand = std::sqrt(sq / static_cast<double>(tr.rows.size()));
  const TrajectoryRow& last = tr.rows.back();
  m.final_alpha = last.alpha_hat;
  m.final_beta = last.beta_hat;
  m.final_zeta = last.zeta_hat;
  return m;
}

}  // namespace flexprice
