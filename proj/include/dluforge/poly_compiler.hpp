#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dluforge/circuit.hpp"
#include "dluforge/gadgets.hpp"
#include "dluforge/recurrence.hpp"

namespace dluforge {

/// Product strategy for the recurrence pipeline. The DLU version is exact and
/// hands back copies of both factors from its `lin` neurons.
struct DluProductPolicy {
  Activation activation() const { return Activation::dlu(); }
  bool exact() const { return true; }
  int stage_depth() const { return 2; }
  double factor_bound(int /*j*/) const { return 1.0; }

  ProductTaps product(CircuitBuilder& b, const Signal& x, const Signal& y, double M) const {
    return emit_product_tapped(b, x, y, M);
  }
  ProductTaps square(CircuitBuilder& b, const Signal& x, double M) const {
    auto s = emit_square(b, x / M);
    return {M * M * s.value, M * s.input, M * s.input};
  }
};

struct PipelineOptions {
  bool keep_basis = false;  // also return p_0 .. p_n on the output layer
};

struct PipelineResult {
  Signal value;
  std::vector<Signal> basis;  // filled when keep_basis is set
};

namespace detail {

// Rigorous lower bound of sum_{k<=j} c_k p_k on [-1, 1]: grid minimum minus a
// Markov-inequality margin, never below -sum |c_k|.
inline double partial_sum_lower_bound(const BasisPolynomial& poly, int j) {
  constexpr int kGrid = 1001;
  double abs_sum = 0.0;
  double lipschitz = 0.0;
  for (int k = 0; k <= j; ++k) {
    abs_sum += std::abs(poly.coefficients[k]);
    lipschitz += std::abs(poly.coefficients[k]) * k * k;
  }
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    double x = -1.0 + 2.0 * i / (kGrid - 1);
    auto p = basis_values(poly.basis, j, x);
    double s = 0.0;
    for (int k = 0; k <= j; ++k) s += poly.coefficients[k] * p[k];
    lo = std::min(lo, s);
  }
  const double h = 2.0 / (kGrid - 1);
  return std::max(lo - 1e-9 - lipschitz * h / 2.0, -abs_sum - 1e-9);
}

inline double abs_sum(const BasisPolynomial& poly) {
  double s = 0.0;
  for (double c : poly.coefficients) s += std::abs(c);
  return s;
}

}  // namespace detail

/// Emits sum_k c_k p_k(x) for several coefficient vectors at once, x in
/// [-1, 1] given as a signal. One recurrence pipeline is shared: stage j turns
/// (x, p_j, p_{j-1}, P_{j-1}) into (x, p_{j+1}, p_j, P_j) in `stage_depth`
/// layers, with one partial sum P per polynomial riding along through shifted
/// identity carries.
template <class Policy>
std::vector<PipelineResult> emit_polynomials(CircuitBuilder& b, const Signal& x_in,
                                             const std::vector<BasisPolynomial>& polys_in, const Policy& policy,
                                             const PipelineOptions& opts = {}) {
  if (polys_in.empty()) throw ParameterError("no polynomials to emit");
  std::vector<BasisPolynomial> polys;
  bool mixed = false;
  for (const auto& p : polys_in) {
    if (p.coefficients.empty()) throw ParameterError("polynomial has no coefficients");
    for (double c : p.coefficients)
      if (!std::isfinite(c)) throw ParameterError("polynomial coefficients must be finite");
    if (p.basis != polys_in.front().basis) mixed = true;
  }
  for (const auto& p : polys_in)
    polys.push_back(p.basis == Basis::Monomial || mixed ? to_chebyshev(p) : p);
  const Basis basis = polys.front().basis;

  int n = 0;
  for (const auto& p : polys)
    n = std::max(n, opts.keep_basis ? static_cast<int>(p.coefficients.size()) - 1 : p.degree());
  for (auto& p : polys) p.coefficients.resize(n + 1, 0.0);
  const std::size_t count = polys.size();

  std::vector<PipelineResult> out(count);
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      const auto& c = polys[i].coefficients;
      out[i].value = n == 0 ? Signal::constant_value(c[0]) : c[0] + c[1] * x_in;
      if (opts.keep_basis) {
        out[i].basis = {Signal::constant_value(1.0)};
        if (n == 1) out[i].basis.push_back(x_in);
      }
    }
    return out;
  }

  const double carry_lb = policy.exact() ? -1.0625 : -2.0;

  Signal x = x_in;
  Signal pj = x_in;                               // p_j
  Signal pprev = Signal::constant_value(1.0);     // p_{j-1}
  std::vector<Signal> acc;                        // P_{j-1} per polynomial
  for (const auto& p : polys) acc.push_back(Signal::constant_value(p.coefficients[0]));
  std::vector<Signal> kept;                       // p_0 .. p_{j-2} after stage j

  for (int j = 1; j <= n - 1; ++j) {
    const int top = x.layer + policy.stage_depth();
    const double M = policy.factor_bound(j);
    ProductTaps taps = j == 1 ? policy.square(b, x, M) : policy.product(b, x, pj, M);

    for (std::size_t i = 0; i < count; ++i) {
      Signal s = acc[i] + polys[i].coefficients[j] * pj;
      double lb = policy.exact() ? detail::partial_sum_lower_bound(polys[i], j)
                                 : -2.0 * detail::abs_sum(polys[i]) - 1.0;
      acc[i] = b.carry(s, top, lb);
    }

    Signal pprev_next = j == 2 ? taps.x : b.carry(pprev, top, carry_lb);
    if (opts.keep_basis) {
      for (auto& k : kept) k = b.carry(k, top, carry_lb);
      kept.push_back(pprev_next);
    }

    auto r = recurrence(basis, j + 1);
    Signal pnext = r.a * taps.value + r.b * taps.y - r.c * pprev_next;

    x = taps.x;
    pprev = taps.y;
    pj = pnext;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i].value = acc[i] + polys[i].coefficients[n] * pj;
    if (opts.keep_basis) {
      out[i].basis = kept;
      out[i].basis.push_back(pprev);
      out[i].basis.push_back(pj);
    }
  }
  return out;
}

template <class Policy>
PipelineResult emit_polynomial(CircuitBuilder& b, const Signal& x, const BasisPolynomial& poly, const Policy& policy,
                               const PipelineOptions& opts = {}) {
  return emit_polynomials(b, x, {poly}, policy, opts).front();
}

/// Stage count budget (depth 2n, width 12, 61n weights) for degree n.
inline Budget polynomial_budget(int n) { return {2L * n, 12, 61L * n}; }

/// Polynomial on [-1, 1] as a one-input DLU network.
inline Network compile_polynomial(const BasisPolynomial& poly) {
  CircuitBuilder b(1, Activation::dlu());
  return b.finish(emit_polynomial(b, b.input(0), poly, DluProductPolicy{}).value);
}

struct RationalOptions {
  double root_threshold = 1e-6;
  int grid_points = 10001;
};

/// Bookkeeping from a rational compile, useful for reports.
struct RationalInfo {
  double q_min = 0.0;     // grid minimum of |q| before scaling
  double p_max = 0.0;     // grid maximum of |p|
  double scale = 1.0;     // both p and q are multiplied by this
  double product_bound = 0.0;
  int pipeline_depth = 0;
};

namespace detail {

inline double bisect_root(const BasisPolynomial& q, double lo, double hi) {
  double flo = q(lo);
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = q(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline void check_root_free(const BasisPolynomial& q, const RationalOptions& opts, double& qmin_abs, double& sign) {
  const int G = std::max(opts.grid_points, 3);
  double prev_x = -1.0;
  double prev = q(-1.0);
  qmin_abs = std::abs(prev);
  double argmin = -1.0;
  for (int i = 1; i < G; ++i) {
    double x = -1.0 + 2.0 * i / (G - 1);
    double v = q(x);
    if ((v < 0.0) != (prev < 0.0) || v == 0.0) {
      double root = v == 0.0 ? x : bisect_root(q, prev_x, x);
      std::ostringstream msg;
      msg << "denominator changes sign near x = " << root;
      throw DomainError(msg.str());
    }
    if (std::abs(v) < qmin_abs) {
      qmin_abs = std::abs(v);
      argmin = x;
    }
    prev = v;
    prev_x = x;
  }
  if (qmin_abs < opts.root_threshold) {
    std::ostringstream msg;
    msg << "denominator nearly vanishes near x = " << argmin << " (|q| = " << qmin_abs << ")";
    throw DomainError(msg.str());
  }
  sign = prev < 0.0 ? -1.0 : 1.0;
}

inline BasisPolynomial scaled(BasisPolynomial p, double k) {
  for (auto& c : p.coefficients) c *= k;
  return p;
}

}  // namespace detail

/// Emits p(x)/q(x) for x in [-1, 1]. Numerator and denominator share one
/// recurrence pipeline (two accumulators), then a reciprocal layer and a
/// compact product.
inline Signal emit_rational(CircuitBuilder& b, const Signal& x, const BasisPolynomial& p_in,
                            const BasisPolynomial& q_in, const RationalOptions& opts = {},
                            RationalInfo* info = nullptr) {
  if (p_in.coefficients.empty() || q_in.coefficients.empty()) {
    throw ParameterError("rational function needs numerator and denominator coefficients");
  }
  BasisPolynomial p = p_in.basis == Basis::Monomial ? to_chebyshev(p_in) : p_in;
  BasisPolynomial q = q_in.basis == Basis::Monomial ? to_chebyshev(q_in) : q_in;

  double qmin = 0.0;
  double sign = 1.0;
  detail::check_root_free(q, opts, qmin, sign);
  if (sign < 0.0) {
    p = detail::scaled(p, -1.0);
    q = detail::scaled(q, -1.0);
  }

  RationalInfo local;
  local.q_min = qmin;
  if (q.degree() == 0) {
    // constant denominator: no division needed
    auto num = emit_polynomial(b, x, detail::scaled(p, 1.0 / q.coefficients[0]), DluProductPolicy{});
    local.pipeline_depth = num.value.is_constant() ? 0 : num.value.layer - x.layer;
    if (info) *info = local;
    return num.value;
  }

  const int G = std::max(opts.grid_points, 3);
  double pmax = 0.0;
  for (int i = 0; i < G; ++i) pmax = std::max(pmax, std::abs(p(-1.0 + 2.0 * i / (G - 1))));
  const double h = 2.0 / (G - 1);
  double q_lip = 0.0;
  double p_lip = 0.0;
  for (std::size_t k = 0; k < q.coefficients.size(); ++k) q_lip += std::abs(q.coefficients[k]) * k * k;
  for (std::size_t k = 0; k < p.coefficients.size(); ++k) p_lip += std::abs(p.coefficients[k]) * k * k;
  double qlo = std::max(qmin - q_lip * h / 2.0, 0.5 * qmin);
  double phi = std::max(pmax + p_lip * h / 2.0, 1e-300);
  local.p_max = pmax;

  if (pmax == 0.0 && p.degree() == 0) {
    if (info) *info = local;
    return Signal::constant_value(0.0);
  }

  // balance the product domain: |c p| <= M and 1/(c q) <= M with M = sqrt(phi/qlo)
  const double scale = 1.0 / std::sqrt(phi * qlo);
  const double M = std::sqrt(phi / qlo);
  local.scale = scale;
  local.product_bound = M;

  auto values = emit_polynomials(b, x, {detail::scaled(p, scale), detail::scaled(q, scale)}, DluProductPolicy{});
  const Signal& num = values[0].value;
  const Signal& den = values[1].value;
  local.pipeline_depth = den.layer - x.layer;

  Signal out = emit_division(b, num, den, scale * qlo, M, ProductForm::Compact);
  if (info) *info = local;
  return out;
}

inline Network compile_rational(const BasisPolynomial& p, const BasisPolynomial& q, const RationalOptions& opts = {},
                                RationalInfo* info = nullptr) {
  CircuitBuilder b(1, Activation::dlu());
  return b.finish(emit_rational(b, b.input(0), p, q, opts, info));
}

/// (2 max(n, m) + 3, 12, 122 max(n, m) + 51). The shared pipeline keeps the
/// width at 12 without splitting the allowance between p and q.
inline Budget rational_budget(int n, int m) {
  const long k = std::max(n, m);
  return {2 * k + 3, 12, 122 * k + 51};
}

}  // namespace dluforge
