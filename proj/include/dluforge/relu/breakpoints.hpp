#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dluforge/network.hpp"

namespace dluforge {

/// Continuous piecewise-linear function on [0, 1], stored by its knots
/// 0 = t_0 < ... < t_K = 1 and the values there. Interior knots where the
/// slope actually changes (beyond rounding) are the breakpoints.
struct PiecewiseLinear1D {
  std::vector<double> knots;
  std::vector<double> values;

  double operator()(double x) const {
    if (knots.size() == 1) return values[0];
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    std::size_t i = it == knots.begin() ? 0 : static_cast<std::size_t>(it - knots.begin()) - 1;
    i = std::min(i, knots.size() - 2);
    const double t = (x - knots[i]) / (knots[i + 1] - knots[i]);
    return values[i] + t * (values[i + 1] - values[i]);
  }

  double slope(std::size_t segment) const {
    return (values[segment + 1] - values[segment]) / (knots[segment + 1] - knots[segment]);
  }

  std::vector<double> breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
      const double s0 = slope(i - 1), s1 = slope(i);
      if (std::abs(s1 - s0) > 1e-9 * (1.0 + std::abs(s0) + std::abs(s1))) out.push_back(knots[i]);
    }
    return out;
  }
  std::size_t breakpoint_count() const { return breakpoints().size(); }

  /// sup_{[0,1]} |this - f| for f convex and differentiable; df_inverse maps
  /// a slope s to the point where f' = s. The maximum sits at a knot or there.
  template <class F, class DF>
  double sup_distance(F f, DF df_inverse) const {
    double err = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) err = std::max(err, std::abs(values[i] - f(knots[i])));
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      const double x = df_inverse(slope(i));
      if (x > knots[i] && x < knots[i + 1]) err = std::max(err, std::abs((*this)(x) - f(x)));
    }
    return err;
  }
};

namespace detail {

inline constexpr double kKnotMerge = 1e-12;

inline std::vector<double> merge_knots(std::vector<double> k) {
  std::sort(k.begin(), k.end());
  std::vector<double> out;
  for (double v : k)
    if (out.empty() || v - out.back() > kKnotMerge) out.push_back(v);
  // keep the exact endpoints
  out.front() = 0.0;
  if (out.back() < 1.0 - kKnotMerge) out.push_back(1.0);
  out.back() = 1.0;
  return out;
}

inline PiecewiseLinear1D resample(const PiecewiseLinear1D& f, const std::vector<double>& knots) {
  PiecewiseLinear1D g{knots, {}};
  g.values.reserve(knots.size());
  for (double x : knots) g.values.push_back(f(x));
  return g;
}

// sigma of a PL function: adds the zero crossings, then clips
inline PiecewiseLinear1D relu_of(const PiecewiseLinear1D& f) {
  std::vector<double> knots = f.knots;
  for (std::size_t i = 0; i + 1 < f.knots.size(); ++i) {
    const double a = f.values[i], c = f.values[i + 1];
    if ((a < 0.0 && c > 0.0) || (a > 0.0 && c < 0.0)) {
      knots.push_back(f.knots[i] + (f.knots[i + 1] - f.knots[i]) * (a / (a - c)));
    }
  }
  PiecewiseLinear1D g = resample(f, merge_knots(std::move(knots)));
  for (double& v : g.values) v = std::max(v, 0.0);
  return g;
}

}  // namespace detail

/// Exact piecewise-linear form of a one-input ReLU network on [0, 1],
/// propagated layer by layer. Knots closer than 1e-12 are merged.
inline PiecewiseLinear1D extract_breakpoints(const Network& net) {
  if (net.input_dim() != 1) throw ShapeError("breakpoint extraction needs a one-input network");
  if (net.output_dim() != 1) throw ShapeError("breakpoint extraction needs a scalar output");
  for (const auto& l : net.hidden_layers())
    if (l.activation.tag != ActivationTag::ReLU) {
      throw UnsupportedError("breakpoint extraction supports ReLU hidden layers only");
    }

  std::vector<PiecewiseLinear1D> cur{PiecewiseLinear1D{{0.0, 1.0}, {0.0, 1.0}}};
  auto affine = [&cur](const Layer& layer) {
    std::vector<double> all;
    for (const auto& f : cur) all.insert(all.end(), f.knots.begin(), f.knots.end());
    auto knots = detail::merge_knots(std::move(all));
    std::vector<PiecewiseLinear1D> aligned;
    for (const auto& f : cur) aligned.push_back(detail::resample(f, knots));
    std::vector<PiecewiseLinear1D> out;
    for (std::size_t r = 0; r < layer.width(); ++r) {
      PiecewiseLinear1D g{knots, std::vector<double>(knots.size(), layer.bias[r])};
      for (std::size_t c = 0; c < aligned.size(); ++c) {
        const double w = layer.weights(r, c);
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < knots.size(); ++i) g.values[i] += w * aligned[c].values[i];
      }
      out.push_back(std::move(g));
    }
    return out;
  };
  for (const auto& layer : net.hidden_layers()) {
    auto pre = affine(layer);
    cur.clear();
    for (const auto& p : pre) cur.push_back(detail::relu_of(p));
  }
  return affine(net.output_layer()).front();
}

/// 3^D prod d_i for D hidden layers of widths d_i: the count bound for a net
/// whose hidden part has depth D (with the output layer this is 3^{L-1}
/// prod_{i<L} d_i for L = D + 1 layers).
inline double breakpoint_bound(const Network& net) {
  double m = 1.0;
  for (const auto& l : net.hidden_layers()) m *= 3.0 * static_cast<double>(l.width());
  return m;
}

/// The layer recursion B_k = d_k (2 B_{k-1} + 1), B_0 = 0, which the product
/// form above dominates.
inline double breakpoint_recursion_bound(const Network& net) {
  double B = 0.0;
  for (const auto& l : net.hidden_layers()) B = static_cast<double>(l.width()) * (2.0 * B + 1.0);
  return B;
}

}  // namespace dluforge
