#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexprice/adaptive_price.hpp"
#include "flexprice/flex_function.hpp"
#include "flexprice/linear_flex.hpp"
#include "flexprice/optimal_price.hpp"
#include "flexprice/signals.hpp"

namespace flexprice {

using json = nlohmann::ordered_json;

enum class PlantType { linear, nonlinear, frozen };
enum class ControllerType { exact, clamped, interval_optimal, adaptive, price };
enum class Integrator { euler, rk4, euler_maruyama };

// Piecewise-constant plant coefficients; active from t_start until the next
// segment begins.
struct FrozenSegment {
  double t_start = 0.0;
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
};

struct AdaptiveSettings {
  double lambda = -1.0;
  std::array<double, 3> gamma{10.0, 10.0, 10.0};
  std::array<ProjectionSpec, 3> specs{ProjectionSpec{0.0, 1.0 / 3.0, 0.03},
                                      ProjectionSpec{0.0, 1.0 / 3.0, 0.03},
                                      ProjectionSpec{0.0, 1.0 / 3.0, 0.03}};
  std::optional<std::array<double, 3>> init;  // default: spec midpoints
  double y0 = 0.5;
  int sign_b = -1;
  enum class StateSource { direct, reconstructed };
  StateSource state_source = StateSource::direct;

  [[nodiscard]] std::array<double, 3> initial_gains() const {
    if (init) return *init;
    return {specs[0].midpoint(), specs[1].midpoint(), specs[2].midpoint()};
  }
};

struct IntervalSettings {
  double length = 1.0;
  int n_sub = 16;
  double u_resolution = 1e-6;
};

struct SimConfig {
  double dt = 1e-3;
  double horizon = 24.0;
  Integrator integrator = Integrator::rk4;
  std::uint64_t seed = 1;
  bool abort_on_error = false;
};

struct Scenario {
  PlantType plant = PlantType::linear;
  double x0 = 0.5;
  LinearParams linear;
  FlexParams flex;
  double frozen_C = 2.97;
  std::vector<FrozenSegment> segments;
  ControllerType controller = ControllerType::exact;
  IntervalSettings interval;
  AdaptiveSettings adaptive;
  SignalSpec price_signal = SignalSpec::constant(0.5);
  SignalSpec B = SignalSpec::constant(0.5);
  SignalSpec D_ref = SignalSpec::constant(0.65);
  SimConfig sim;
  std::string output_prefix;
};

namespace detail {

inline void expect_keys(const json& obj, const std::string& where,
                        std::initializer_list<const char*> allowed,
                        std::vector<std::string>& errs) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok) errs.push_back(where + ": unknown key '" + item.key() + "'");
  }
}

inline bool get_number(const json& obj, const char* key, double& out,
                       const std::string& where,
                       std::vector<std::string>& errs) {
  if (!obj.contains(key)) return false;
  if (!obj[key].is_number()) {
    errs.push_back(where + "." + key + ": expected a number");
    return false;
  }
  out = obj[key].get<double>();
  return true;
}

inline bool get_string(const json& obj, const char* key, std::string& out,
                       const std::string& where,
                       std::vector<std::string>& errs) {
  if (!obj.contains(key)) return false;
  if (!obj[key].is_string()) {
    errs.push_back(where + "." + key + ": expected a string");
    return false;
  }
  out = obj[key].get<std::string>();
  return true;
}

inline bool get_bool(const json& obj, const char* key, bool& out,
                     const std::string& where, std::vector<std::string>& errs) {
  if (!obj.contains(key)) return false;
  if (!obj[key].is_boolean()) {
    errs.push_back(where + "." + key + ": expected a boolean");
    return false;
  }
  out = obj[key].get<bool>();
  return true;
}

inline bool get_vector(const json& obj, const char* key,
                       std::vector<double>& out, const std::string& where,
                       std::vector<std::string>& errs) {
  if (!obj.contains(key)) return false;
  if (!obj[key].is_array()) {
    errs.push_back(where + "." + key + ": expected an array of numbers");
    return false;
  }
  out.clear();
  for (const auto& v : obj[key]) {
    if (!v.is_number()) {
      errs.push_back(where + "." + key + ": expected an array of numbers");
      return false;
    }
    out.push_back(v.get<double>());
  }
  return true;
}

inline SignalSpec parse_signal(const json& j, const std::string& where,
                               std::vector<std::string>& errs) {
  SignalSpec s;
  if (!j.is_object()) {
    errs.push_back(where + ": expected an object");
    return s;
  }
  std::string kind;
  if (!get_string(j, "kind", kind, where, errs)) {
    errs.push_back(where + ".kind: required");
    return s;
  }
  if (kind == "constant") {
    s.kind = SignalSpec::Kind::constant;
    expect_keys(j, where, {"kind", "value"}, errs);
    if (!get_number(j, "value", s.value, where, errs))
      errs.push_back(where + ".value: required for constant");
  } else if (kind == "piecewise") {
    s.kind = SignalSpec::Kind::piecewise;
    expect_keys(j, where, {"kind", "levels", "breakpoints"}, errs);
    if (!get_vector(j, "levels", s.levels, where, errs))
      errs.push_back(where + ".levels: required for piecewise");
    if (!get_vector(j, "breakpoints", s.breakpoints, where, errs))
      errs.push_back(where + ".breakpoints: required for piecewise");
  } else if (kind == "sinusoid") {
    s.kind = SignalSpec::Kind::sinusoid;
    expect_keys(j, where, {"kind", "offset", "amplitude", "period", "phase"},
                errs);
    get_number(j, "offset", s.offset, where, errs);
    get_number(j, "amplitude", s.amplitude, where, errs);
    if (!get_number(j, "period", s.period, where, errs))
      errs.push_back(where + ".period: required for sinusoid");
    get_number(j, "phase", s.phase, where, errs);
  } else if (kind == "table") {
    s.kind = SignalSpec::Kind::table;
    expect_keys(j, where, {"kind", "times", "values", "interp"}, errs);
    if (!get_vector(j, "times", s.times, where, errs))
      errs.push_back(where + ".times: required for table");
    if (!get_vector(j, "values", s.values, where, errs))
      errs.push_back(where + ".values: required for table");
    std::string interp = "hold";
    get_string(j, "interp", interp, where, errs);
    if (interp == "hold")
      s.interp = SignalSpec::Interp::hold;
    else if (interp == "linear")
      s.interp = SignalSpec::Interp::linear;
    else
      errs.push_back(where + ".interp: must be 'hold' or 'linear'");
  } else {
    errs.push_back(where + ".kind: must be one of constant, piecewise, "
                           "sinusoid, table");
  }
  return s;
}

inline json signal_to_json(const SignalSpec& s) {
  json j;
  switch (s.kind) {
    case SignalSpec::Kind::constant:
      j["kind"] = "constant";
      j["value"] = s.value;
      break;
    case SignalSpec::Kind::piecewise:
      j["kind"] = "piecewise";
      j["levels"] = s.levels;
      j["breakpoints"] = s.breakpoints;
      break;
    case SignalSpec::Kind::sinusoid:
      j["kind"] = "sinusoid";
      j["offset"] = s.offset;
      j["amplitude"] = s.amplitude;
      j["period"] = s.period;
      j["phase"] = s.phase;
      break;
    case SignalSpec::Kind::table:
      j["kind"] = "table";
      j["times"] = s.times;
      j["values"] = s.values;
      j["interp"] = (s.interp == SignalSpec::Interp::hold) ? "hold" : "linear";
      break;
  }
  return j;
}

}  // namespace detail

// Parses and fully validates a scenario document. All violations are
// collected; scenario is only returned when errors is empty.
inline std::optional<Scenario> parse_scenario(const json& root,
                                              std::vector<std::string>& errs) {
  using detail::expect_keys;
  using detail::get_bool;
  using detail::get_number;
  using detail::get_string;
  using detail::get_vector;
  Scenario sc;
  if (!root.is_object()) {
    errs.push_back("scenario: top level must be an object");
    return std::nullopt;
  }
  expect_keys(root, "scenario", {"plant", "controller", "signals", "sim",
                                 "output"},
              errs);

  // plant
  if (root.contains("plant")) {
    const json& jp = root["plant"];
    if (!jp.is_object()) {
      errs.push_back("plant: expected an object");
    } else {
      expect_keys(jp, "plant", {"type", "x0", "linear", "nonlinear", "frozen"},
                  errs);
      std::string type;
      if (!get_string(jp, "type", type, "plant", errs))
        errs.push_back("plant.type: required");
      else if (type == "linear")
        sc.plant = PlantType::linear;
      else if (type == "nonlinear")
        sc.plant = PlantType::nonlinear;
      else if (type == "frozen")
        sc.plant = PlantType::frozen;
      else
        errs.push_back("plant.type: must be linear, nonlinear, or frozen");
      get_number(jp, "x0", sc.x0, "plant", errs);
      if (sc.x0 < 0.0 || sc.x0 > 1.0)
        errs.push_back("plant.x0: must be in [0,1]");
      if (jp.contains("linear")) {
        const json& jl = jp["linear"];
        expect_keys(jl, "plant.linear",
                    {"eta1", "eta2", "eta3", "lambda1", "lambda2", "C",
                     "Delta"},
                    errs);
        get_number(jl, "eta1", sc.linear.eta1, "plant.linear", errs);
        get_number(jl, "eta2", sc.linear.eta2, "plant.linear", errs);
        get_number(jl, "eta3", sc.linear.eta3, "plant.linear", errs);
        get_number(jl, "lambda1", sc.linear.lambda1, "plant.linear", errs);
        get_number(jl, "lambda2", sc.linear.lambda2, "plant.linear", errs);
        get_number(jl, "C", sc.linear.C, "plant.linear", errs);
        get_number(jl, "Delta", sc.linear.Delta, "plant.linear", errs);
      }
      if (jp.contains("nonlinear")) {
        const json& jn = jp["nonlinear"];
        expect_keys(jn, "plant.nonlinear",
                    {"alpha", "beta", "k", "C", "Delta", "sigma_x", "sigma_y"},
                    errs);
        std::vector<double> v;
        if (get_vector(jn, "alpha", v, "plant.nonlinear", errs)) {
          if (v.size() != 4)
            errs.push_back("plant.nonlinear.alpha: needs exactly 4 entries");
          else
            for (std::size_t i = 0; i < 4; ++i) sc.flex.alpha[i] = v[i];
        }
        if (get_vector(jn, "beta", v, "plant.nonlinear", errs)) {
          if (v.size() != 7)
            errs.push_back("plant.nonlinear.beta: needs exactly 7 entries");
          else
            for (std::size_t i = 0; i < 7; ++i) sc.flex.beta[i] = v[i];
        }
        get_number(jn, "k", sc.flex.k, "plant.nonlinear", errs);
        get_number(jn, "C", sc.flex.C, "plant.nonlinear", errs);
        get_number(jn, "Delta", sc.flex.Delta, "plant.nonlinear", errs);
        get_number(jn, "sigma_x", sc.flex.sigma_x, "plant.nonlinear", errs);
        get_number(jn, "sigma_y", sc.flex.sigma_y, "plant.nonlinear", errs);
      }
      if (jp.contains("frozen")) {
        const json& jf = jp["frozen"];
        expect_keys(jf, "plant.frozen", {"C", "segments"}, errs);
        get_number(jf, "C", sc.frozen_C, "plant.frozen", errs);
        if (!(sc.frozen_C > 0.0))
          errs.push_back("plant.frozen.C: must be > 0");
        if (jf.contains("segments") && jf["segments"].is_array()) {
          double prev = -1.0;
          for (const auto& js : jf["segments"]) {
            FrozenSegment seg;
            expect_keys(js, "plant.frozen.segments[]",
                        {"t_start", "a", "b", "d"}, errs);
            get_number(js, "t_start", seg.t_start, "plant.frozen.segments[]",
                       errs);
            get_number(js, "a", seg.a, "plant.frozen.segments[]", errs);
            get_number(js, "b", seg.b, "plant.frozen.segments[]", errs);
            get_number(js, "d", seg.d, "plant.frozen.segments[]", errs);
            if (seg.b == 0.0)
              errs.push_back("plant.frozen.segments[]: b must be nonzero");
            if (sc.segments.empty() && seg.t_start != 0.0)
              errs.push_back("plant.frozen.segments: first must start at 0");
            if (!sc.segments.empty() && !(seg.t_start > prev))
              errs.push_back(
                  "plant.frozen.segments: t_start must be strictly "
                  "increasing");
            prev = seg.t_start;
            sc.segments.push_back(seg);
          }
        }
        if (sc.segments.empty() && sc.plant == PlantType::frozen)
          errs.push_back("plant.frozen.segments: required, at least one");
      } else if (sc.plant == PlantType::frozen) {
        errs.push_back("plant.frozen: required for frozen plant");
      }
    }
  } else {
    errs.push_back("plant: required");
  }

  // controller
  if (root.contains("controller")) {
    const json& jc = root["controller"];
    if (!jc.is_object()) {
      errs.push_back("controller: expected an object");
    } else {
      expect_keys(jc, "controller", {"type", "interval", "adaptive", "price"},
                  errs);
      std::string type;
      if (!get_string(jc, "type", type, "controller", errs))
        errs.push_back("controller.type: required");
      else if (type == "exact")
        sc.controller = ControllerType::exact;
      else if (type == "clamped")
        sc.controller = ControllerType::clamped;
      else if (type == "interval_optimal")
        sc.controller = ControllerType::interval_optimal;
      else if (type == "adaptive")
        sc.controller = ControllerType::adaptive;
      else if (type == "price")
        sc.controller = ControllerType::price;
      else
        errs.push_back("controller.type: must be exact, clamped, "
                       "interval_optimal, adaptive, or price");
      if (jc.contains("interval")) {
        const json& ji = jc["interval"];
        expect_keys(ji, "controller.interval",
                    {"length", "n_sub", "u_resolution"}, errs);
        get_number(ji, "length", sc.interval.length, "controller.interval",
                   errs);
        double n = sc.interval.n_sub;
        if (get_number(ji, "n_sub", n, "controller.interval", errs))
          sc.interval.n_sub = static_cast<int>(n);
        get_number(ji, "u_resolution", sc.interval.u_resolution,
                   "controller.interval", errs);
        if (!(sc.interval.length > 0.0))
          errs.push_back("controller.interval.length: must be > 0");
      }
      if (jc.contains("adaptive")) {
        const json& ja = jc["adaptive"];
        expect_keys(ja, "controller.adaptive",
                    {"lambda", "gamma", "specs", "init", "y0", "sign_b",
                     "state_source"},
                    errs);
        get_number(ja, "lambda", sc.adaptive.lambda, "controller.adaptive",
                   errs);
        std::vector<double> v;
        if (get_vector(ja, "gamma", v, "controller.adaptive", errs)) {
          if (v.size() != 3)
            errs.push_back("controller.adaptive.gamma: needs 3 entries");
          else
            for (std::size_t i = 0; i < 3; ++i) sc.adaptive.gamma[i] = v[i];
        }
        if (ja.contains("specs")) {
          if (!ja["specs"].is_array() || ja["specs"].size() != 3) {
            errs.push_back("controller.adaptive.specs: needs 3 entries");
          } else {
            for (std::size_t i = 0; i < 3; ++i) {
              const json& jsp = ja["specs"][i];
              expect_keys(jsp, "controller.adaptive.specs[]",
                          {"min", "max", "epsilon"}, errs);
              get_number(jsp, "min", sc.adaptive.specs[i].theta_min,
                         "controller.adaptive.specs[]", errs);
              get_number(jsp, "max", sc.adaptive.specs[i].theta_max,
                         "controller.adaptive.specs[]", errs);
              get_number(jsp, "epsilon", sc.adaptive.specs[i].epsilon,
                         "controller.adaptive.specs[]", errs);
            }
          }
        }
        if (get_vector(ja, "init", v, "controller.adaptive", errs)) {
          if (v.size() != 3)
            errs.push_back("controller.adaptive.init: needs 3 entries");
          else
            sc.adaptive.init = std::array<double, 3>{v[0], v[1], v[2]};
        }
        get_number(ja, "y0", sc.adaptive.y0, "controller.adaptive", errs);
        double sb = sc.adaptive.sign_b;
        if (get_number(ja, "sign_b", sb, "controller.adaptive", errs))
          sc.adaptive.sign_b = static_cast<int>(sb);
        std::string src;
        if (get_string(ja, "state_source", src, "controller.adaptive", errs)) {
          if (src == "direct")
            sc.adaptive.state_source = AdaptiveSettings::StateSource::direct;
          else if (src == "reconstructed")
            sc.adaptive.state_source =
                AdaptiveSettings::StateSource::reconstructed;
          else
            errs.push_back("controller.adaptive.state_source: must be "
                           "'direct' or 'reconstructed'");
        }
      }
      if (jc.contains("price"))
        sc.price_signal =
            detail::parse_signal(jc["price"], "controller.price", errs);
    }
  } else {
    errs.push_back("controller: required");
  }

  // signals
  if (root.contains("signals")) {
    const json& js = root["signals"];
    if (!js.is_object()) {
      errs.push_back("signals: expected an object");
    } else {
      expect_keys(js, "signals", {"B", "D_ref"}, errs);
      if (js.contains("B"))
        sc.B = detail::parse_signal(js["B"], "signals.B", errs);
      if (js.contains("D_ref"))
        sc.D_ref = detail::parse_signal(js["D_ref"], "signals.D_ref", errs);
    }
  }

  // sim
  if (root.contains("sim")) {
    const json& js = root["sim"];
    if (!js.is_object()) {
      errs.push_back("sim: expected an object");
    } else {
      expect_keys(js, "sim",
                  {"dt", "horizon", "integrator", "seed", "abort_on_error"},
                  errs);
      get_number(js, "dt", sc.sim.dt, "sim", errs);
      get_number(js, "horizon", sc.sim.horizon, "sim", errs);
      std::string integ;
      if (get_string(js, "integrator", integ, "sim", errs)) {
        if (integ == "euler")
          sc.sim.integrator = Integrator::euler;
        else if (integ == "rk4")
          sc.sim.integrator = Integrator::rk4;
        else if (integ == "euler_maruyama")
          sc.sim.integrator = Integrator::euler_maruyama;
        else
          errs.push_back("sim.integrator: must be euler, rk4, or "
                         "euler_maruyama");
      }
      if (js.contains("seed")) {
        if (js["seed"].is_number_unsigned() || js["seed"].is_number_integer())
          sc.sim.seed = js["seed"].get<std::uint64_t>();
        else
          errs.push_back("sim.seed: expected an integer");
      }
      get_bool(js, "abort_on_error", sc.sim.abort_on_error, "sim", errs);
    }
  }

  // output
  if (root.contains("output")) {
    const json& jo = root["output"];
    if (!jo.is_object())
      errs.push_back("output: expected an object");
    else {
      expect_keys(jo, "output", {"prefix"}, errs);
      get_string(jo, "prefix", sc.output_prefix, "output", errs);
    }
  }

  // cross-field validation
  {
    if (sc.plant == PlantType::linear || sc.controller == ControllerType::exact ||
        sc.controller == ControllerType::clamped ||
        sc.controller == ControllerType::interval_optimal) {
      auto e = check(sc.linear);
      errs.insert(errs.end(), e.begin(), e.end());
    }
    if (sc.plant == PlantType::nonlinear) {
      auto e = check(sc.flex);
      errs.insert(errs.end(), e.begin(), e.end());
    }
    if ((sc.controller == ControllerType::exact ||
         sc.controller == ControllerType::clamped ||
         sc.controller == ControllerType::interval_optimal) &&
        sc.plant != PlantType::linear)
      errs.push_back("controller: exact/clamped/interval_optimal require the "
                     "linear plant");
    if (sc.controller == ControllerType::price &&
        sc.plant == PlantType::frozen)
      errs.push_back("controller.price: not available for the frozen plant");
    if (sc.controller == ControllerType::adaptive) {
      AdaptiveState st;
      st.specs = sc.adaptive.specs;
      st.gamma_alpha = sc.adaptive.gamma[0];
      st.gamma_beta = sc.adaptive.gamma[1];
      st.gamma_zeta = sc.adaptive.gamma[2];
      st.lambda = sc.adaptive.lambda;
      st.sign_b = sc.adaptive.sign_b;
      auto e = check(st);
      errs.insert(errs.end(), e.begin(), e.end());
      if (sc.adaptive.y0 < 0.0 || sc.adaptive.y0 > 1.0)
        errs.push_back("controller.adaptive.y0: must be in [0,1]");
      if (sc.adaptive.init) {
        for (std::size_t i = 0; i < 3; ++i) {
          const double v = (*sc.adaptive.init)[i];
          if (v < sc.adaptive.specs[i].theta_min ||
              v > sc.adaptive.specs[i].theta_max)
            errs.push_back("controller.adaptive.init[" + std::to_string(i) +
                           "]: outside the projection bounds");
        }
      }
    }
    if (sc.controller == ControllerType::price) {
      auto e = check(sc.price_signal, "controller.price", true);
      errs.insert(errs.end(), e.begin(), e.end());
    }
    if (sc.controller == ControllerType::interval_optimal) {
      IntervalGrid grid{0.0, sc.interval.length, sc.interval.n_sub,
                        sc.interval.u_resolution};
      auto e = check(grid);
      errs.insert(errs.end(), e.begin(), e.end());
    }
    auto eb = check(sc.B, "signals.B", true);
    errs.insert(errs.end(), eb.begin(), eb.end());
    auto ed = check(sc.D_ref, "signals.D_ref", true);
    errs.insert(errs.end(), ed.begin(), ed.end());
    if (!(sc.sim.dt > 0.0)) errs.push_back("sim.dt: must be > 0");
    if (!(sc.sim.horizon >= sc.sim.dt))
      errs.push_back("sim.horizon: must be >= dt");
    if (sc.sim.integrator == Integrator::euler_maruyama &&
        sc.plant != PlantType::nonlinear)
      errs.push_back("sim.integrator: euler_maruyama requires the nonlinear "
                     "plant");
  }

  if (!errs.empty()) return std::nullopt;
  return sc;
}

// Fully default-materialized echo of a parsed scenario; reproduces the run.
[[nodiscard]] inline json effective_config(const Scenario& sc) {
  json root;
  json jp;
  jp["type"] = (sc.plant == PlantType::linear)      ? "linear"
               : (sc.plant == PlantType::nonlinear) ? "nonlinear"
                                                    : "frozen";
  jp["x0"] = sc.x0;
  if (sc.plant == PlantType::linear) {
    jp["linear"] = {{"eta1", sc.linear.eta1},       {"eta2", sc.linear.eta2},
                    {"eta3", sc.linear.eta3},       {"lambda1", sc.linear.lambda1},
                    {"lambda2", sc.linear.lambda2}, {"C", sc.linear.C},
                    {"Delta", sc.linear.Delta}};
  } else if (sc.plant == PlantType::nonlinear) {
    jp["nonlinear"] = {
        {"alpha", sc.flex.alpha},     {"beta", sc.flex.beta},
        {"k", sc.flex.k},             {"C", sc.flex.C},
        {"Delta", sc.flex.Delta},     {"sigma_x", sc.flex.sigma_x},
        {"sigma_y", sc.flex.sigma_y}};
  } else {
    json segs = json::array();
    for (const auto& s : sc.segments)
      segs.push_back({{"t_start", s.t_start}, {"a", s.a}, {"b", s.b},
                      {"d", s.d}});
    jp["frozen"] = {{"C", sc.frozen_C}, {"segments", segs}};
  }
  root["plant"] = jp;

  json jc;
  jc["type"] = (sc.controller == ControllerType::exact)     ? "exact"
               : (sc.controller == ControllerType::clamped) ? "clamped"
               : (sc.controller == ControllerType::interval_optimal)
                   ? "interval_optimal"
               : (sc.controller == ControllerType::adaptive) ? "adaptive"
                                                             : "price";
  if (sc.controller == ControllerType::interval_optimal)
    jc["interval"] = {{"length", sc.interval.length},
                      {"n_sub", sc.interval.n_sub},
                      {"u_resolution", sc.interval.u_resolution}};
  if (sc.controller == ControllerType::adaptive) {
    json specs = json::array();
    for (const auto& s : sc.adaptive.specs)
      specs.push_back({{"min", s.theta_min}, {"max", s.theta_max},
                       {"epsilon", s.epsilon}});
    jc["adaptive"] = {
        {"lambda", sc.adaptive.lambda},
        {"gamma", sc.adaptive.gamma},
        {"specs", specs},
        {"init", sc.adaptive.initial_gains()},
        {"y0", sc.adaptive.y0},
        {"sign_b", sc.adaptive.sign_b},
        {"state_source",
         sc.adaptive.state_source == AdaptiveSettings::StateSource::direct
             ? "direct"
             : "reconstructed"}};
  }
  if (sc.controller == ControllerType::price)
    jc["price"] = detail::signal_to_json(sc.price_signal);
  root["controller"] = jc;

  root["signals"] = {{"B", detail::signal_to_json(sc.B)},
                     {"D_ref", detail::signal_to_json(sc.D_ref)}};
  root["sim"] = {{"dt", sc.sim.dt},
                 {"horizon", sc.sim.horizon},
                 {"integrator", sc.sim.integrator == Integrator::euler ? "euler"
                                : sc.sim.integrator == Integrator::rk4
                                    ? "rk4"
                                    : "euler_maruyama"},
                 {"seed", sc.sim.seed},
                 {"abort_on_error", sc.sim.abort_on_error}};
  root["output"] = {{"prefix", sc.output_prefix}};
  return root;
}

// Loads and validates a scenario file; throws with all messages joined.
[[nodiscard]] inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const std::exception& ex) {
    throw std::runtime_error("parse error in " + path + ": " + ex.what());
  }
  std::vector<std::string> errs;
  auto sc = parse_scenario(root, errs);
  if (!sc) {
    std::ostringstream os;
    os << "invalid scenario " << path << ":";
    for (const auto& e : errs) os << "\n  " << e;
    throw std::runtime_error(os.str());
  }
  return *sc;
}

}  // namespace flexprice
