#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "dluforge/error.hpp"

namespace dluforge {

enum class Basis { Legendre, Chebyshev, Monomial };

inline std::string_view to_string(Basis b) {
  switch (b) {
    case Basis::Legendre:
      return "legendre";
    case Basis::Chebyshev:
      return "chebyshev";
    case Basis::Monomial:
      return "monomial";
  }
  return "?";
}

inline Basis basis_from_string(std::string_view name) {
  if (name == "legendre") return Basis::Legendre;
  if (name == "chebyshev") return Basis::Chebyshev;
  if (name == "monomial") return Basis::Monomial;
  throw ParameterError("unknown basis '" + std::string(name) + "'");
}

/// p_n = (a_n x + b_n) p_{n-1} - c_n p_{n-2}, p_0 = 1, p_1 = x.
struct RecurrenceCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Coefficients for n >= 2.
inline RecurrenceCoeffs recurrence(Basis basis, int n) {
  if (n < 2) throw ParameterError("recurrence coefficients are defined for n >= 2");
  const double nn = n;
  switch (basis) {
    case Basis::Legendre:
      return {(2.0 * nn - 1.0) / nn, 0.0, (nn - 1.0) / nn};
    case Basis::Chebyshev:
      return {2.0, 0.0, 1.0};
    case Basis::Monomial:
      return {1.0, 0.0, 0.0};
  }
  return {};
}

/// p_0(x) .. p_n(x) by the recurrence.
inline std::vector<double> basis_values(Basis basis, int n, double x) {
  std::vector<double> p(static_cast<std::size_t>(std::max(n, 0)) + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = x;
  for (int k = 2; k <= n; ++k) {
    auto r = recurrence(basis, k);
    p[k] = (r.a * x + r.b) * p[k - 1] - r.c * p[k - 2];
  }
  return p;
}

/// sum_k c_k p_k(x).
struct BasisPolynomial {
  Basis basis = Basis::Chebyshev;
  std::vector<double> coefficients;

  int degree() const {
    for (int k = static_cast<int>(coefficients.size()) - 1; k >= 0; --k)
      if (coefficients[k] != 0.0) return k;
    return 0;
  }

  double operator()(double x) const {
    if (coefficients.empty()) return 0.0;
    auto p = basis_values(basis, static_cast<int>(coefficients.size()) - 1, x);
    double s = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k) s += coefficients[k] * p[k];
    return s;
  }
};

inline constexpr int kMaxConversionDegree = 64;

/// Rewrites a polynomial in the Chebyshev basis. Runs the source recurrence on
/// Chebyshev coefficient vectors using x T_j = (T_{j+1} + T_{|j-1|}) / 2.
inline BasisPolynomial to_chebyshev(const BasisPolynomial& poly) {
  if (poly.basis == Basis::Chebyshev) return poly;
  const int n = static_cast<int>(poly.coefficients.size()) - 1;
  if (n > kMaxConversionDegree) {
    throw ParameterError("basis conversion is capped at degree " + std::to_string(kMaxConversionDegree));
  }
  BasisPolynomial out{Basis::Chebyshev, std::vector<double>(std::max(n, 0) + 1, 0.0)};
  if (n < 0) return out;

  auto times_x = [](const std::vector<double>& v) {
    std::vector<double> r(v.size() + 1, 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] == 0.0) continue;
      if (j == 0) {
        r[1] += v[0];
      } else {
        r[j + 1] += 0.5 * v[j];
        r[j - 1] += 0.5 * v[j];
      }
    }
    return r;
  };

  std::vector<double> prev{1.0};  // p_0 in Chebyshev coefficients
  std::vector<double> cur{0.0, 1.0};
  auto accumulate = [&](const std::vector<double>& p, double c) {
    for (std::size_t j = 0; j < p.size(); ++j) out.coefficients[j] += c * p[j];
  };
  accumulate(prev, poly.coefficients[0]);
  if (n >= 1) accumulate(cur, poly.coefficients[1]);
  for (int k = 2; k <= n; ++k) {
    auto r = recurrence(poly.basis, k);
    auto next = times_x(cur);
    for (auto& v : next) v *= r.a;
    for (std::size_t j = 0; j < cur.size(); ++j) next[j] += r.b * cur[j];
    for (std::size_t j = 0; j < prev.size(); ++j) next[j] -= r.c * prev[j];
    prev = std::move(cur);
    cur = std::move(next);
    accumulate(cur, poly.coefficients[k]);
  }
  return out;
}

/// Chebyshev coefficients of the degree-n interpolant of f at the n+1
/// Chebyshev-Gauss nodes. Exact for polynomials of degree <= n.
inline std::vector<double> chebyshev_coefficients(const std::function<double(double)>& f, int n) {
  if (n < 0) throw ParameterError("degree must be nonnegative");
  const int K = n + 1;
  std::vector<double> fx(K);
  for (int i = 0; i < K; ++i) fx[i] = f(std::cos(std::numbers::pi * (i + 0.5) / K));
  std::vector<double> c(K, 0.0);
  for (int k = 0; k < K; ++k) {
    double s = 0.0;
    for (int i = 0; i < K; ++i) s += fx[i] * std::cos(std::numbers::pi * k * (i + 0.5) / K);
    c[k] = s * (k == 0 ? 1.0 : 2.0) / K;
  }
  return c;
}

}  // namespace dluforge
