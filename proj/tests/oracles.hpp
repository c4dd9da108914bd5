#pragma once

// Reference values computed without touching the library's own recurrences,
// gadgets or quadrature. Deliberately slow and literal.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline double choose(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// P_n(x) = 2^-n sum_k C(n,k)^2 (x-1)^(n-k) (x+1)^k
inline double legendre(int n, double x) {
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double c = choose(n, k);
    s += c * c * std::pow(x - 1.0, n - k) * std::pow(x + 1.0, k);
  }
  return std::ldexp(s, -n);
}

inline double chebyshev(int n, double x) { return std::cos(n * std::acos(std::clamp(x, -1.0, 1.0))); }

inline double legendre_series(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * legendre(static_cast<int>(k), x);
  return s;
}

inline double chebyshev_series(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * chebyshev(static_cast<int>(k), x);
  return s;
}

// Chebyshev coefficients of f on [-1, 1] by Gauss-Chebyshev quadrature with
// many nodes (aliasing below 1e-15 for smooth f and modest N).
template <class F>
std::vector<double> chebyshev_coeffs(F f, int N, int nodes = 2048) {
  std::vector<double> c(N + 1, 0.0);
  for (int j = 0; j < nodes; ++j) {
    const double th = std::numbers::pi * (j + 0.5) / nodes;
    const double v = f(std::cos(th));
    for (int n = 0; n <= N; ++n) c[n] += v * std::cos(n * th);
  }
  for (int n = 0; n <= N; ++n) c[n] *= (n == 0 ? 1.0 : 2.0) / nodes;
  return c;
}

// B_s f(x) = sum_k f(k/s) C(s,k) x^k (1-x)^(s-k)
template <class F>
double bernstein(F f, int s, double x) {
  double v = 0.0;
  for (int k = 0; k <= s; ++k) v += f(static_cast<double>(k) / s) * choose(s, k) * std::pow(x, k) * std::pow(1.0 - x, s - k);
  return v;
}

// Modulus of continuity by brute force over a grid pair list.
template <class F>
double modulus(F f, double delta, int points) {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i) v[i] = f(static_cast<double>(i) / (points - 1));
  const double h = 1.0 / (points - 1);
  double w = 0.0;
  for (int i = 0; i < points; ++i)
    for (int j = i + 1; j < points && (j - i) * h <= delta + 1e-15; ++j) w = std::max(w, std::abs(v[i] - v[j]));
  return w;
}

// Piecewise-linear interpolant of x^2 at the dyadic grid k 2^-m.
inline double dyadic_square_interpolant(double x, int m) {
  const double h = std::ldexp(1.0, -m);
  const double k = std::min(std::floor(x / h), std::ldexp(1.0, m) - 1.0);
  const double a = k * h, b = a + h;
  return a * a + (x - a) / h * (b * b - a * a);
}

// Best linear approximation error of x^2 on an interval of length h.
inline double best_linear_square_error(double h) { return h * h / 8.0; }

inline double dlu(double x) { return x >= 0.0 ? x : x / (1.0 - x); }
inline double relu(double x) { return std::max(x, 0.0); }

}  // namespace oracle
