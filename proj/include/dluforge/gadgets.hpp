#pragma once

#include <algorithm>
#include <cmath>

#include "dluforge/circuit.hpp"

// Building blocks emitted straight into a CircuitBuilder whose activation is
// DLU. Every gadget is exact in real arithmetic on its stated domain.
namespace dluforge {

/// Outputs of the square gadget on t in [-1, 1], all on layer t.layer + 2.
///   value = t^2, quad = t^2 + 5t - 6, lin = 6 - 5t, input = t.
struct SquareTaps {
  Signal value;
  Signal quad;
  Signal lin;
  Signal input;
};

// 12 rho(1 - 12 rho(-t-1) + 12 rho(-t-2)) = t^2 + 5t - 6 and
// 11 rho(1 - 5 rho(t+1) / 11) = 6 - 5t on [-1, 1].
inline SquareTaps emit_square(CircuitBuilder& b, const Signal& t) {
  Signal a = b.neuron(-t - 1.0);
  Signal c2 = b.neuron(-t - 2.0);
  Signal c = b.neuron(t + 1.0);
  Signal u = b.neuron(1.0 - 12.0 * a + 12.0 * c2);
  Signal v = b.neuron(1.0 - (5.0 / 11.0) * c);
  SquareTaps taps;
  taps.quad = 12.0 * u;
  taps.lin = 11.0 * v;
  taps.value = taps.quad + taps.lin;
  taps.input = (6.0 - 11.0 * v) / 5.0;
  return taps;
}

/// Same gadget with the `lin` neuron left out: 12u alone gives t^2 + 5t - 6.
inline Signal emit_square_quad(CircuitBuilder& b, const Signal& t) {
  Signal a = b.neuron(-t - 1.0);
  Signal c2 = b.neuron(-t - 2.0);
  return 12.0 * b.neuron(1.0 - 12.0 * a + 12.0 * c2);
}

struct ProductTaps {
  Signal value;  // x * y
  Signal x;      // x, recovered on the output layer
  Signal y;      // y, recovered on the output layer
};

/// Literal three-square product, xy = 2M^2 (s((x+y)/2M) - s(x/2M) - s(y/2M)).
/// Depth 2, width 9 (first layer), 42 nonzero weights for input-level x, y.
inline Signal emit_product_literal(CircuitBuilder& b, const Signal& x, const Signal& y, double M) {
  const double k = 1.0 / (2.0 * M);
  auto s1 = emit_square(b, (x + y) * k);
  auto s2 = emit_square(b, x * k);
  auto s3 = emit_square(b, y * k);
  return 2.0 * M * M * (s1.value - s2.value - s3.value);
}

/// Two-square product with taps: t1 = (x+y)/2M, t2 = (x-y)/2M,
/// xy = M^2 (t1^2 - t2^2). Keeping both `lin` neurons lets x and y be read
/// back on the output layer at no extra depth. Width 6 then 4.
inline ProductTaps emit_product_tapped(CircuitBuilder& b, const Signal& x, const Signal& y, double M) {
  const double k = 1.0 / (2.0 * M);
  auto s1 = emit_square(b, (x + y) * k);
  auto s2 = emit_square(b, (x - y) * k);
  ProductTaps taps;
  taps.value = M * M * (s1.value - s2.value);
  taps.x = M * (s1.input + s2.input);
  taps.y = M * (s1.input - s2.input);
  return taps;
}

/// Two-square product where the `lin` terms are replaced by a carried copy of
/// y: t1^2 - t2^2 = (quad1 - quad2) - 5 (t1 - t2) and t1 - t2 = y/M.
/// Cheapest form when neither input is needed afterwards.
inline Signal emit_product_compact(CircuitBuilder& b, const Signal& x, const Signal& y, double M) {
  if (x.is_constant()) return y * x.constant;
  if (y.is_constant()) return x * y.constant;
  const double k = 1.0 / (2.0 * M);
  Signal q1 = emit_square_quad(b, (x + y) * k);
  Signal q2 = emit_square_quad(b, (x - y) * k);
  Signal yc = b.carry(y, y.layer + 2, -M);
  return M * M * (q1 - q2) - 5.0 * M * yc;
}

/// Square of x in [-B, B] with the two-neuron second layer.
inline Signal emit_square_scaled(CircuitBuilder& b, const Signal& x, double B) {
  if (x.is_constant()) return Signal::constant_value(x.constant * x.constant);
  return B * B * emit_square(b, x / B).value;
}

/// 1/z for z >= a: rho(1 - z/a) = a/z - 1. Depth 1, one neuron.
inline Signal emit_reciprocal(CircuitBuilder& b, const Signal& z, double a) {
  Signal r = b.neuron(1.0 - z / a);
  return (r + 1.0) / a;
}

enum class ProductForm { Literal, Compact };

/// y / z for z in [a, zmax], |y| <= ymax. Reciprocal on the first layer with y
/// carried alongside, then a product with bound max(ymax, 1/a).
inline Signal emit_division(CircuitBuilder& b, const Signal& y, const Signal& z, double a, double ymax,
                            ProductForm form = ProductForm::Literal) {
  Signal inv = emit_reciprocal(b, z, a);
  Signal yc = b.carry(y, inv.layer, -ymax);
  const double M = std::max(ymax, 1.0 / a);
  if (form == ProductForm::Literal) return emit_product_literal(b, inv, yc, M);
  return emit_product_compact(b, yc, inv, M);
}

}  // namespace dluforge
