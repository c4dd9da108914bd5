#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dluforge/circuit.hpp"
#include "dluforge/poly_compiler.hpp"

namespace dluforge {

/// f_m(u) = u - sum_{s<=m} g_s(u) / 4^s for u in [0, 1], where g is the hat
/// 2 sigma(u) - 4 sigma(u - 1/2) + 2 sigma(u - 1). On [0, 1] the last term never
/// fires, so each layer holds sigma(y), sigma(y - 1/2) and the running sum
/// (which stays >= 0 and passes through sigma untouched). Depth m, width 3.
inline Signal emit_yarotsky_square(CircuitBuilder& b, const Signal& u, int m) {
  if (m < 1) throw ParameterError("yarotsky square needs m >= 1");
  Signal y = u;                          // g_{s-1}(u), on the current layer
  Signal acc = u;                        // f_{s-1}(u)
  double scale = 1.0;
  for (int s = 1; s <= m; ++s) {
    Signal h1 = b.neuron(y);
    Signal h2 = b.neuron(y - 0.5);
    Signal g = 2.0 * h1 - 4.0 * h2;
    scale /= 4.0;
    // acc == y at s == 1, so reuse h1 instead of a third neuron
    Signal carried = s == 1 ? h1 : b.neuron(acc);
    acc = carried - scale * g;
    y = g;
  }
  return acc;
}

/// ReLU network for x^2 on [0, 1] with sup error 2^{-(2m+2)}.
inline Network yarotsky_square(int m) {
  CircuitBuilder b(1, Activation::relu());
  return b.finish(emit_yarotsky_square(b, b.input(0), m));
}

/// 2M^2 (f_m(|x+y|/2M) - f_m(|x|/2M) - f_m(|y|/2M)) for x, y in [-M, M].
/// The absolute values take one layer, so depth is m + 1.
inline Signal emit_yarotsky_product(CircuitBuilder& b, const Signal& x, const Signal& y, int m, double M) {
  if (!(M > 0.0)) throw ParameterError("yarotsky product needs M > 0");
  auto absval = [&](const Signal& s) { return b.neuron(s) + b.neuron(-1.0 * s); };
  const double k = 1.0 / (2.0 * M);
  Signal sum = absval(x + y) * k;
  Signal ax = absval(x) * k;
  Signal ay = absval(y) * k;
  Signal fs = emit_yarotsky_square(b, sum, m);
  Signal fx = emit_yarotsky_square(b, ax, m);
  Signal fy = emit_yarotsky_square(b, ay, m);
  return 2.0 * M * M * (fs - fx - fy);
}

inline Network yarotsky_product(int m, double M) {
  CircuitBuilder b(2, Activation::relu());
  return b.finish(emit_yarotsky_product(b, b.input(0), b.input(1), m, M));
}

inline double yarotsky_square_bound(int m) { return std::ldexp(1.0, -(2 * m + 2)); }
inline double yarotsky_product_bound(int m, double M) { return 3.0 * M * M * std::ldexp(1.0, -(2 * m + 1)); }

/// Product policy for the recurrence pipeline built from ReLU product
/// networks. x and y ride along through identity carries.
struct ReluProductPolicy {
  int m = 1;

  Activation activation() const { return Activation::relu(); }
  bool exact() const { return false; }
  int stage_depth() const { return m + 1; }
  // |p~_j| <= 1 + eps_j with eps_j = 2^{2j-2m-2}; capped so M stays sane
  double factor_bound(int j) const { return 1.0 + std::min(1.0, std::ldexp(1.0, 2 * j - 2 * m - 2)); }

  ProductTaps product(CircuitBuilder& b, const Signal& x, const Signal& y, double M) const {
    Signal v = emit_yarotsky_product(b, x, y, m, M);
    return {v, b.carry(x, v.layer, -M), b.carry(y, v.layer, -M)};
  }
  ProductTaps square(CircuitBuilder& b, const Signal& x, double M) const { return product(b, x, x, M); }
};

struct ReluPolyResult {
  Network net;
  Budget claim;
  double theoretical_bound = 0.0;  // M / 2^{2m-2n+3}
  double coefficient_bound = 0.0;  // M = max |a_k|
  bool bound_meaningful = true;    // false when m is too small for n
  std::string warning;
};

/// Legendre expansion on [0, 1] through ReLU product networks. Same pipeline
/// as the DLU compiler with every exact product replaced by an approximate one.
inline ReluPolyResult relu_poly_approx(const BasisPolynomial& poly, int m) {
  if (m < 1) throw ParameterError("relu polynomial needs m >= 1");
  if (poly.coefficients.empty()) throw ParameterError("polynomial has no coefficients");
  const int n = std::max(poly.degree(), 1);
  CircuitBuilder b(1, Activation::relu());
  Signal v = emit_polynomial(b, b.input(0), poly, ReluProductPolicy{m}).value;

  ReluPolyResult out{b.finish(v), {}, 0.0, 0.0, true, {}};
  for (double c : poly.coefficients) out.coefficient_bound = std::max(out.coefficient_bound, std::abs(c));
  out.theoretical_bound = out.coefficient_bound * std::ldexp(1.0, -(2 * m - 2 * n + 3));
  out.claim = {static_cast<long>(n) * (m + 1), 18, static_cast<long>(n) * (36L * m + 29)};
  if (2 * m - 2 * n + 3 <= 0) {
    out.bound_meaningful = false;
    out.warning = "m = " + std::to_string(m) + " is too small for degree " + std::to_string(n) +
                  "; the bound exceeds the coefficient size";
  }
  return out;
}

}  // namespace dluforge
