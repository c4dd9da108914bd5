#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dluforge/verify/measure.hpp"

namespace dluforge {

/// One built instance handed to the sweep.
struct BuiltNetwork {
  Network net;
  std::string id;
  std::optional<Budget> claim;
  std::optional<double> bound;
};

enum class RateFit {
  GeometricRatio,  // log e ~ a + b t, rate = e^b (error factor per unit step)
  LogLogSlope,     // log e ~ a + b log t, rate = b
};

inline std::string_view to_string(RateFit r) { return r == RateFit::GeometricRatio ? "geometric-ratio" : "log-log-slope"; }

inline RateFit rate_fit_from_string(std::string_view s) {
  if (s == "geometric-ratio" || s == "ratio") return RateFit::GeometricRatio;
  if (s == "log-log-slope" || s == "slope") return RateFit::LogLogSlope;
  throw ParameterError("unknown rate fit '" + std::string(s) + "'");
}

struct SweepResult {
  std::string parameter;
  std::vector<double> values;          // successfully built values, in order
  std::vector<ErrorReport> reports;    // one per entry of values
  RateFit method = RateFit::GeometricRatio;
  std::optional<double> rate;          // needs >= 3 points with positive error
  bool partial = false;
  std::string failure;                 // why the sweep stopped early

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

/// Least-squares slope of log(error) against t (or log t). Points with zero
/// error carry no rate information and are skipped.
inline std::optional<double> fit_rate(const std::vector<double>& t, const std::vector<double>& err, RateFit method) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(err[i] > 0.0)) continue;
    xs.push_back(method == RateFit::LogLogSlope ? std::log(t[i]) : t[i]);
    ys.push_back(std::log(err[i]));
  }
  if (xs.size() < 3) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double b = sxy / sxx;
  return method == RateFit::GeometricRatio ? std::exp(b) : b;
}

/// Builds and measures one network per value. A builder exception stops the
/// sweep; what was measured so far is kept and the result is flagged partial.
inline SweepResult sweep(const std::string& parameter, const std::vector<double>& values,
                         const std::function<BuiltNetwork(double)>& builder, const TargetFunction& target,
                         const NormSpec& norm, const GridSpec& grid, RateFit method) {
  if (values.size() < 3) throw ParameterError("a sweep needs at least 3 parameter values");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw ParameterError("sweep values must be strictly increasing");
  if (method == RateFit::LogLogSlope && !(values.front() > 0.0)) {
    throw ParameterError("log-log fits need positive parameter values");
  }

  SweepResult out;
  out.parameter = parameter;
  out.method = method;
  for (double v : values) {
    try {
      BuiltNetwork b = builder(v);
      ErrorReport r = measure_error(b.net, target, norm, grid, b.id, b.claim);
      r.theoretical_bound = b.bound;
      out.values.push_back(v);
      out.reports.push_back(std::move(r));
    } catch (const std::exception& e) {
      out.partial = true;
      out.failure = parameter + " = " + std::to_string(v) + ": " + e.what();
      break;
    }
  }
  std::vector<double> errs;
  for (const auto& r : out.reports) errs.push_back(r.measured_error);
  out.rate = fit_rate(out.values, errs, method);
  return out;
}

}  // namespace dluforge
