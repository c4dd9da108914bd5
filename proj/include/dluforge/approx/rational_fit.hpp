#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dluforge/poly_compiler.hpp"
#include "dluforge/recurrence.hpp"

namespace dluforge {

/// p/q in the Chebyshev basis of sigma in [-1, 1], with q > 0 on [-1, 1].
struct RationalFit {
  BasisPolynomial p;
  BasisPolynomial q;
  double fit_error = 0.0;  // sup |p/q - f| on the check grid
  int numerator_degree = 0;
  int denominator_degree = 0;
};

/// Pluggable univariate fitter: (f on [-1, 1], n) -> type (n, n) fit.
using RationalFitProvider = std::function<RationalFit(const std::function<double(double)>&, int)>;

struct LeastSquaresFitOptions {
  int sample_factor = 20;       // Chebyshev sample nodes per unknown
  int check_points = 2001;
  double prune_relative = 1e-13;
  RationalOptions pole_check;
};

namespace detail {

inline double fit_sup_error(const RationalFit& r, const std::function<double(double)>& f, int points) {
  double err = 0.0;
  for (int i = 0; i < points; ++i) {
    const double s = -1.0 + 2.0 * i / (points - 1);
    err = std::max(err, std::abs(r.p(s) / r.q(s) - f(s)));
  }
  return err;
}

inline void prune(std::vector<double>& c, double rel) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  for (double& v : c)
    if (std::abs(v) <= rel * m) v = 0.0;
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

// Linearised least squares: minimise sum_i (p(s_i) - f_i q(s_i))^2 with the
// constant Chebyshev coefficient of q pinned to 1.
inline RationalFit linearised_fit(const std::function<double(double)>& f, int n, int m,
                                  const LeastSquaresFitOptions& opts) {
  const int unknowns = (n + 1) + m;
  const int S = std::max(opts.sample_factor * unknowns, 2 * unknowns + 1);
  Eigen::MatrixXd A(S, unknowns);
  Eigen::VectorXd rhs(S);
  for (int i = 0; i < S; ++i) {
    const double th = std::numbers::pi * (i + 0.5) / S;
    const double s = std::cos(th);
    const double fi = f(s);
    for (int k = 0; k <= n; ++k) A(i, k) = std::cos(k * th);
    for (int k = 1; k <= m; ++k) A(i, n + k) = -fi * std::cos(k * th);
    rhs(i) = fi;
  }
  Eigen::VectorXd sol = A.completeOrthogonalDecomposition().solve(rhs);
  RationalFit r;
  r.p = {Basis::Chebyshev, std::vector<double>(n + 1)};
  r.q = {Basis::Chebyshev, std::vector<double>(m + 1)};
  for (int k = 0; k <= n; ++k) r.p.coefficients[k] = sol(k);
  r.q.coefficients[0] = 1.0;
  for (int k = 1; k <= m; ++k) r.q.coefficients[k] = sol(n + k);
  prune(r.p.coefficients, opts.prune_relative);
  prune(r.q.coefficients, opts.prune_relative);
  r.numerator_degree = r.p.degree();
  r.denominator_degree = r.q.degree();
  return r;
}

}  // namespace detail

/// Default provider. Fits type (n, n); if the denominator is not safely
/// positive it retries once with denominator degree n/2, then gives up.
inline RationalFit least_squares_rational_fit(const std::function<double(double)>& f, int n,
                                              const LeastSquaresFitOptions& opts = {}) {
  if (n < 0) throw ParameterError("rational fit degree must be >= 0");
  std::string last_error;
  for (int m : {n, n / 2}) {
    RationalFit r = detail::linearised_fit(f, n, m, opts);
    try {
      double qmin = 0.0, sign = 1.0;
      detail::check_root_free(r.q, opts.pole_check, qmin, sign);
      if (sign < 0.0) throw DomainError("denominator is negative");
    } catch (const DomainError& e) {
      last_error = e.what();
      continue;
    }
    r.fit_error = detail::fit_sup_error(r, f, opts.check_points);
    return r;
  }
  throw ConstructionError("rational fit failed: " + last_error);
}

inline RationalFitProvider default_rational_fit_provider() {
  return [](const std::function<double(double)>& f, int n) { return least_squares_rational_fit(f, n); };
}

}  // namespace dluforge
