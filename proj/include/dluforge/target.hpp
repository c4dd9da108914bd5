#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dluforge/error.hpp"

namespace dluforge {

/// Axis-aligned box lo <= x <= hi.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(std::size_t d, double lo, double hi) { return {std::vector<double>(d, lo), std::vector<double>(d, hi)}; }
  std::size_t dim() const { return lo.size(); }
  bool contains(std::span<const double> x, double tol = 1e-12) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    return true;
  }
};

/// Smoothness hint (r, p) for reports only.
struct Smoothness {
  double r = 0.0;
  double p = 0.0;
};

struct TargetFunction {
  std::string name;
  std::size_t dim = 1;
  Box box;
  std::function<double(std::span<const double>)> evaluator;
  std::optional<Smoothness> smoothness;

  double operator()(std::span<const double> x) const {
    if (x.size() != dim) throw ShapeError("target '" + name + "' expects " + std::to_string(dim) + " inputs");
    if (!box.contains(x)) throw DomainError("target '" + name + "' evaluated outside its domain");
    return evaluator(x);
  }
  double operator()(std::initializer_list<double> x) const {
    return (*this)(std::span<const double>(x.begin(), x.size()));
  }
};

inline TargetFunction make_target(std::string name, Box box, std::function<double(std::span<const double>)> f,
                                  std::optional<Smoothness> smooth = std::nullopt) {
  TargetFunction t;
  t.name = std::move(name);
  t.dim = box.dim();
  t.box = std::move(box);
  t.evaluator = std::move(f);
  t.smoothness = smooth;
  return t;
}

/// Univariate convenience.
inline TargetFunction make_target_1d(std::string name, double lo, double hi, std::function<double(double)> f) {
  return make_target(std::move(name), Box::cube(1, lo, hi), [f = std::move(f)](std::span<const double> x) {
    return f(x[0]);
  });
}

inline std::vector<std::string> target_names() {
  return {"identity", "ramp", "one",     "square",  "square_sym", "cube",      "product", "exp",
          "exp_abs",  "exp_l1_2", "exp_l1_3", "abs_half", "runge",    "step_half", "sin_prod"};
}

/// Built-in analytic targets, looked up by name.
inline TargetFunction target_by_name(const std::string& name) {
  auto l1 = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return std::exp(-s);
  };
  if (name == "identity") return make_target_1d(name, -1.0, 1.0, [](double x) { return x; });
  if (name == "ramp") return make_target_1d(name, 0.0, 1.0, [](double x) { return x; });
  if (name == "one") return make_target_1d(name, 0.0, 1.0, [](double) { return 1.0; });
  if (name == "square") return make_target_1d(name, 0.0, 1.0, [](double x) { return x * x; });
  if (name == "square_sym") return make_target_1d(name, -1.0, 1.0, [](double x) { return x * x; });
  if (name == "cube") return make_target_1d(name, -1.0, 1.0, [](double x) { return x * x * x; });
  if (name == "product") {
    return make_target(name, Box::cube(2, -1.0, 1.0), [](std::span<const double> x) { return x[0] * x[1]; });
  }
  if (name == "exp") return make_target_1d(name, -1.0, 1.0, [](double x) { return std::exp(x); });
  if (name == "exp_abs") return make_target_1d(name, -30.0, 30.0, [](double x) { return std::exp(-std::abs(x)); });
  if (name == "exp_l1_2") return make_target(name, Box::cube(2, -30.0, 30.0), l1);
  if (name == "exp_l1_3") return make_target(name, Box::cube(3, -30.0, 30.0), l1);
  if (name == "abs_half") return make_target_1d(name, 0.0, 1.0, [](double x) { return std::abs(x - 0.5); });
  if (name == "runge") return make_target_1d(name, -1.0, 1.0, [](double x) { return 1.0 / (1.0 + 25.0 * x * x); });
  if (name == "step_half") return make_target_1d(name, 0.0, 1.0, [](double x) { return x <= 0.5 ? 1.0 : 0.0; });
  if (name == "sin_prod") {
    return make_target(name, Box::cube(2, -1.0, 1.0),
                       [](std::span<const double> x) { return std::sin(x[0]) * std::cos(x[1]); });
  }
  throw ParameterError("unknown target '" + name + "'");
}

}  // namespace dluforge
