#pragma once

#include <cmath>
#include <string>

#include "dluforge/circuit.hpp"
#include "dluforge/gadgets.hpp"

namespace dluforge {

namespace detail {
inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be a positive finite number");
  }
}
}  // namespace detail

/// x^2 on [-1, 1]. Depth 2, width 3, 13 weights.
inline Network square_gate() {
  CircuitBuilder b(1, Activation::dlu());
  return b.finish(emit_square(b, b.input(0)).value);
}

/// xy on [-M, M]^2. Depth 2, width 9, 42 weights.
inline Network product_gate(double M) {
  detail::require_positive(M, "M");
  CircuitBuilder b(2, Activation::dlu());
  return b.finish(emit_product_literal(b, b.input(0), b.input(1), M));
}

/// 1/x on [a, inf). Depth 1, width 1, 4 weights.
inline Network reciprocal_gate(double a) {
  detail::require_positive(a, "a");
  CircuitBuilder b(1, Activation::dlu());
  return b.finish(emit_reciprocal(b, b.input(0), a));
}

/// y/x for x in [a, M], y in [-M, M]; inputs ordered (x, y). Depth 3, width 9.
inline Network division_gate(double a, double M) {
  detail::require_positive(a, "a");
  detail::require_positive(M, "M");
  if (a >= M) throw ParameterError("division gate needs a < M");
  CircuitBuilder b(2, Activation::dlu());
  return b.finish(emit_division(b, b.input(1), b.input(0), a, M));
}

/// rho(rho(x - lb)) + lb, the identity for every x >= lb. Depth 2, width 1.
inline Network identity_gadget(double lower_bound) {
  if (!std::isfinite(lower_bound)) throw ParameterError("lower bound must be finite");
  CircuitBuilder b(1, Activation::dlu());
  return b.finish(b.carry(b.input(0), 2, lower_bound));
}

/// rho^{(m)}(n x) / n. Equals x on x >= 0 and x / (1 - m n x) on x < 0, so its
/// distance to ReLU is below 1/(mn) everywhere.
inline Network relu_surrogate(long n, long m) {
  if (n < 1) throw ParameterError("relu surrogate needs n >= 1");
  if (m < 1) throw ParameterError("relu surrogate needs m >= 1");
  CircuitBuilder b(1, Activation::dlu());
  Signal s = b.neuron(b.input(0) * static_cast<double>(n));
  for (long i = 1; i < m; ++i) s = b.neuron(s);
  return b.finish(s / static_cast<double>(n));
}

/// rho(n x) - rho(n x - 1): exactly 1 for x >= 1/n, 1/((1+n|x|)(2+n|x|)) for x < 0.
inline Network indicator_gadget(long n) {
  if (n < 1) throw ParameterError("indicator gadget needs n >= 1");
  CircuitBuilder b(1, Activation::dlu());
  const double k = static_cast<double>(n);
  Signal x = b.input(0);
  return b.finish(b.neuron(k * x) - b.neuron(k * x - 1.0));
}

}  // namespace dluforge
