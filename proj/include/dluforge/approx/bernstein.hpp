#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "dluforge/circuit.hpp"
#include "dluforge/monomial.hpp"
#include "dluforge/target.hpp"

namespace dluforge {

struct BernsteinNetwork {
  Network net;
  Budget claim;
  std::size_t terms = 0;          // lattice points with f(k/s) != 0
  double stated_bound = 0.0;      // (5/4) sum_i w_f^i(1/s)
  double classical_bound = 0.0;   // (5/4) sum_i w_f^i(1/sqrt(s))
};

/// sup over |x_i - y_i| <= delta (other coordinates equal) of |f(x) - f(y)|,
/// on a grid of `points` nodes per axis. Windowed max - min along each grid
/// line, so the grid spacing should be well below delta.
inline double partial_modulus(const TargetFunction& f, std::size_t axis, double delta, int points) {
  if (axis >= f.dim) throw ShapeError("modulus axis out of range");
  if (points < 2) throw ParameterError("modulus grid needs >= 2 points");
  const std::size_t d = f.dim;
  std::size_t lines = 1;
  for (std::size_t j = 0; j < d; ++j)
    if (j != axis) lines *= static_cast<std::size_t>(points);
  const double lo = f.box.lo[axis], hi = f.box.hi[axis];
  const double h = (hi - lo) / (points - 1);
  const int window = static_cast<int>(std::floor(delta / h + 1e-9));

  double best = 0.0;
  std::vector<double> x(d), vals(points);
  for (std::size_t line = 0; line < lines; ++line) {
    std::size_t r = line;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == axis) continue;
      const std::size_t idx = r % points;
      r /= points;
      x[j] = f.box.lo[j] + (f.box.hi[j] - f.box.lo[j]) * idx / (points - 1);
    }
    for (int i = 0; i < points; ++i) {
      x[axis] = lo + h * i;
      vals[i] = f(x);
    }
    std::deque<int> mx, mn;
    for (int i = 0; i < points; ++i) {
      while (!mx.empty() && vals[mx.back()] <= vals[i]) mx.pop_back();
      while (!mn.empty() && vals[mn.back()] >= vals[i]) mn.pop_back();
      mx.push_back(i);
      mn.push_back(i);
      while (mx.front() < i - window) mx.pop_front();
      while (mn.front() < i - window) mn.pop_front();
      best = std::max(best, vals[mx.front()] - vals[mn.front()]);
    }
  }
  return best;
}

namespace detail {

inline double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// max of x^a (1-x)^b on [0, 1]
inline double beta_peak(int a, int b) {
  if (a == 0 || b == 0) return 1.0;
  const double t = static_cast<double>(a) / (a + b);
  return std::pow(t, a) * std::pow(1.0 - t, b);
}

}  // namespace detail

/// B_s f(x) = sum_k f(k/s) prod_i C(s, k_i) x_i^{k_i} (1 - x_i)^{s - k_i} on
/// [0, 1]^d, realized exactly. Leaves are x_i and 1 - x_i; every basis
/// monomial has total degree d s and comes out of one product engine.
inline BernsteinNetwork build_bernstein(const TargetFunction& f, int s, int modulus_points = 10000) {
  if (s < 1) throw ParameterError("bernstein degree s must be >= 1");
  const std::size_t d = f.dim;
  for (std::size_t j = 0; j < d; ++j)
    if (f.box.lo[j] != 0.0 || f.box.hi[j] != 1.0) throw ParameterError("bernstein targets must live on [0, 1]^d");
  double lattice = std::pow(s + 1.0, static_cast<double>(d));
  if (lattice > 1e6) throw ParameterError("bernstein lattice (s+1)^d is too large");

  CircuitBuilder b(d, Activation::dlu());
  std::vector<Signal> leaves;
  for (std::size_t j = 0; j < d; ++j) {
    leaves.push_back(b.input(j));
    leaves.push_back(1.0 - b.input(j));
  }
  auto bound = [](const ProductEngine::Exponents& e) {
    double m = 1.0;
    for (std::size_t i = 0; i + 1 < e.size(); i += 2) m *= detail::beta_peak(e[i], e[i + 1]);
    return m;
  };
  ProductEngine engine(b, leaves, std::vector<double>(leaves.size(), 1.0), bound);
  const int out_layer = 2 * ProductEngine::ceil_log2(static_cast<int>(d) * s);

  BernsteinNetwork out{Network(1, {}, Layer{Matrix(1, 1), {0.0}, Activation::identity()}), {}, 0, 0.0, 0.0};
  Signal sum = Signal::constant_value(0.0);
  std::vector<int> k(d, 0);
  std::vector<double> x(d);
  const long total = static_cast<long>(lattice);
  for (long flat = 0; flat < total; ++flat) {
    long r = flat;
    for (std::size_t j = d; j-- > 0;) {
      k[j] = static_cast<int>(r % (s + 1));
      r /= s + 1;
    }
    double coeff;
    try {
      for (std::size_t j = 0; j < d; ++j) x[j] = static_cast<double>(k[j]) / s;
      coeff = f(x);
    } catch (const std::exception& e) {
      throw ConstructionError(std::string("bernstein lattice evaluation failed: ") + e.what());
    }
    if (!std::isfinite(coeff)) throw ConstructionError("bernstein lattice value is not finite");
    if (coeff == 0.0) continue;
    ProductEngine::Exponents ex(2 * d);
    for (std::size_t j = 0; j < d; ++j) {
      coeff *= detail::binomial(s, k[j]);
      ex[2 * j] = k[j];
      ex[2 * j + 1] = s - k[j];
    }
    sum += coeff * engine.get_at(ex, out_layer);
    ++out.terms;
  }
  out.net = b.finish(sum);

  const double dd = static_cast<double>(d);
  const double lg = std::log2(s + 2.0);
  out.claim = {static_cast<long>(std::floor(2.0 * lg + 4.0 * ProductEngine::ceil_log2(static_cast<int>(d)) + 1.0)),
               static_cast<long>(10.0 * dd * lattice), static_cast<long>(std::floor(126.0 * dd * lattice * lg))};
  for (std::size_t j = 0; j < d; ++j) {
    out.stated_bound += 1.25 * partial_modulus(f, j, 1.0 / s, modulus_points);
    out.classical_bound += 1.25 * partial_modulus(f, j, 1.0 / std::sqrt(static_cast<double>(s)), modulus_points);
  }
  return out;
}

/// Direct evaluation of B_s f, the oracle for the compiled network.
inline double bernstein_value(const TargetFunction& f, int s, std::span<const double> x) {
  const std::size_t d = f.dim;
  const long total = static_cast<long>(std::pow(s + 1.0, static_cast<double>(d)));
  std::vector<int> k(d);
  std::vector<double> node(d);
  double sum = 0.0;
  for (long flat = 0; flat < total; ++flat) {
    long r = flat;
    double w = 1.0;
    for (std::size_t j = d; j-- > 0;) {
      k[j] = static_cast<int>(r % (s + 1));
      r /= s + 1;
      node[j] = static_cast<double>(k[j]) / s;
      w *= detail::binomial(s, k[j]) * std::pow(x[j], k[j]) * std::pow(1.0 - x[j], s - k[j]);
    }
    sum += w * f(node);
  }
  return sum;
}

}  // namespace dluforge
