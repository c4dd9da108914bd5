#pragma once

#include <cmath>
#include <vector>

#include "dluforge/circuit.hpp"
#include "dluforge/poly_compiler.hpp"

namespace dluforge {

struct ExpAbsNetwork {
  Network net;
  Budget claim;
  double lambda = 0.0;
  double theoretical_bound = 0.0;  // 3^{1-n}, reported only
};

/// psi(x) = (rho(lambda x) + rho(-lambda x)) / lambda, a smoothed |x| with
/// 0 <= |x| - psi(x) <= 1/lambda.
inline Network psi_gadget(double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  CircuitBuilder b(1, Activation::dlu());
  Signal x = b.input(0);
  return b.finish((b.neuron(lambda * x) + b.neuron(-lambda * x)) / lambda);
}

/// Truncated exponential series sum_{k<=n} t^k / k!.
inline double exp_series(double t, int n) {
  double term = 1.0;
  double s = 1.0;
  for (int k = 1; k <= n; ++k) {
    term *= t / k;
    s += term;
  }
  return s;
}

/// Phi(x) = 1 / q(psi_d(x)) ~ exp(-|x|_1), q the degree-n exponential series.
/// The unbounded argument t = psi_d is folded into s = 1/(1+t) = rho(-t) + 1,
/// where 1/q(t) = s^n / sum_k (1-s)^k s^{n-k} / k! is a type (n, n) rational
/// function of s on (0, 1], compiled on sigma = 2s - 1.
inline ExpAbsNetwork build_exp_abs(int n, int d) {
  if (n < 1) throw ParameterError("exp_abs needs n >= 1");
  if (d < 1) throw ParameterError("exp_abs needs d >= 1");
  ExpAbsNetwork out{Network(1, {}, Layer{Matrix(1, 1), {0.0}, Activation::identity()}), {}, 0.0, 0.0};
  out.lambda = std::pow(3.0, n) * d;
  out.theoretical_bound = std::pow(3.0, 1 - n);
  out.claim = {2L * n + 4, std::max(12L, 2L * d), 122L * n + 4L * d + 51};

  CircuitBuilder b(static_cast<std::size_t>(d), Activation::dlu());
  Signal psi = Signal::constant_value(0.0);
  for (int j = 0; j < d; ++j) {
    Signal x = b.input(j);
    psi += (b.neuron(out.lambda * x) + b.neuron(-out.lambda * x)) / out.lambda;
  }
  Signal r = b.neuron(-psi);
  Signal sigma = 2.0 * r + 1.0;

  // scaled by n! so the denominator stays well away from the root threshold
  std::vector<double> inv_fact(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) inv_fact[k] = inv_fact[k - 1] / k;
  const double nfact = 1.0 / inv_fact[n];
  auto P = [&](double sg) { return nfact * std::pow((sg + 1.0) / 2.0, n); };
  auto Q = [&](double sg) {
    const double s = (sg + 1.0) / 2.0;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) acc += nfact * inv_fact[k] * std::pow(1.0 - s, k) * std::pow(s, n - k);
    return acc;
  };
  BasisPolynomial p{Basis::Chebyshev, chebyshev_coefficients(P, n)};
  BasisPolynomial q{Basis::Chebyshev, chebyshev_coefficients(Q, n)};
  try {
    Signal y = emit_rational(b, sigma, p, q);
    out.net = b.finish(y);
  } catch (const DomainError& e) {
    throw ConstructionError(std::string("exp_abs denominator is not positive: ") + e.what());
  }
  return out;
}

}  // namespace dluforge
