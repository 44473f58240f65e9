#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace flexprice {

// Declarative time signal. Piecewise levels hold left-closed: level i applies
// on [breakpoint_{i-1}, breakpoint_i).
struct SignalSpec {
  enum class Kind { constant, piecewise, sinusoid, table };
  enum class Interp { hold, linear };

  Kind kind = Kind::constant;
  double value = 0.0;                 // constant
  std::vector<double> levels;         // piecewise, size = breakpoints + 1
  std::vector<double> breakpoints;    // piecewise, strictly increasing
  double offset = 0.0;                // sinusoid
  double amplitude = 0.0;             // sinusoid
  double period = 1.0;                // sinusoid, > 0
  double phase = 0.0;                 // sinusoid, radians
  std::vector<double> times;          // table, strictly increasing
  std::vector<double> values;         // table, size = times
  Interp interp = Interp::hold;       // table

  [[nodiscard]] double operator()(double t) const {
    switch (kind) {
      case Kind::constant:
        return value;
      case Kind::piecewise: {
        const auto it =
            std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
        return levels[static_cast<std::size_t>(it - breakpoints.begin())];
      }
      case Kind::sinusoid:
        return offset +
               amplitude *
                   std::sin(2.0 * 3.14159265358979323846 * t / period + phase);
      case Kind::table: {
        if (t <= times.front()) return values.front();
        if (t >= times.back()) return values.back();
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        const auto i = static_cast<std::size_t>(it - times.begin());
        if (interp == Interp::hold) return values[i - 1];
        const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
        return values[i - 1] + w * (values[i] - values[i - 1]);
      }
    }
    return value;
  }

  [[nodiscard]] static SignalSpec constant(double v) {
    SignalSpec s;
    s.kind = Kind::constant;
    s.value = v;
    return s;
  }

  [[nodiscard]] static SignalSpec piecewise(std::vector<double> lv,
                                            std::vector<double> bp) {
    SignalSpec s;
    s.kind = Kind::piecewise;
    s.levels = std::move(lv);
    s.breakpoints = std::move(bp);
    return s;
  }
};

// unit_range enforces values in [0,1] (demand-type signals).
[[nodiscard]] inline std::vector<std::string> check(const SignalSpec& s,
                                                    const std::string& name,
                                                    bool unit_range) {
  std::vector<std::string> errs;
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  switch (s.kind) {
    case SignalSpec::Kind::constant:
      if (unit_range && !in_unit(s.value))
        errs.push_back(name + ": constant value outside [0,1]");
      break;
    case SignalSpec::Kind::piecewise:
      if (s.levels.empty())
        errs.push_back(name + ": piecewise requires at least one level");
      else if (s.levels.size() != s.breakpoints.size() + 1)
        errs.push_back(name + ": levels must number breakpoints + 1");
      for (std::size_t i = 1; i < s.breakpoints.size(); ++i)
        if (!(s.breakpoints[i] > s.breakpoints[i - 1])) {
          errs.push_back(name + ": breakpoints must be strictly increasing");
          break;
        }
      if (unit_range)
        for (double v : s.levels)
          if (!in_unit(v)) {
            errs.push_back(name + ": level outside [0,1]");
            break;
          }
      break;
    case SignalSpec::Kind::sinusoid:
      if (!(s.period > 0.0)) errs.push_back(name + ": period must be > 0");
      if (unit_range && (!in_unit(s.offset - std::abs(s.amplitude)) ||
                         !in_unit(s.offset + std::abs(s.amplitude))))
        errs.push_back(name + ": sinusoid range exits [0,1]");
      break;
    case SignalSpec::Kind::table:
      if (s.times.empty())
        errs.push_back(name + ": table requires at least one entry");
      else if (s.times.size() != s.values.size())
        errs.push_back(name + ": times and values must have equal length");
      for (std::size_t i = 1; i < s.times.size(); ++i)
        if (!(s.times[i] > s.times[i - 1])) {
          errs.push_back(name + ": table times must be strictly increasing");
          break;
        }
      if (unit_range)
        for (double v : s.values)
          if (!in_unit(v)) {
            errs.push_back(name + ": table value outside [0,1]");
            break;
          }
      break;
  }
  return errs;
}

}  // namespace flexprice
