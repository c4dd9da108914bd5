#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "dluforge/circuit.hpp"
#include "dluforge/monomial.hpp"
#include "dluforge/poly_compiler.hpp"
#include "dluforge/target.hpp"

namespace dluforge {

enum class Truncation { MaxNorm, Hyperbolic };

/// MaxNorm(N): |n|_inf <= N. Hyperbolic(N): prod max(1, n_j) <= N.
struct ExpansionSpec {
  Truncation truncation = Truncation::MaxNorm;
  int N = 1;
};

using MultiIndex = std::vector<int>;

inline void enumerate_hyperbolic(std::size_t d, int N, std::size_t j, long prod, MultiIndex& cur,
                                 std::vector<MultiIndex>& out) {
  if (j == d) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; std::max(1L, static_cast<long>(k)) * prod <= N; ++k) {
    cur[j] = k;
    enumerate_hyperbolic(d, N, j + 1, prod * std::max(1, k), cur, out);
  }
  cur[j] = 0;
}

/// The truncation index set, in lexicographic order.
inline std::vector<MultiIndex> index_set(const ExpansionSpec& spec, std::size_t d) {
  if (spec.N < 1) throw ParameterError("truncation N must be >= 1");
  if (d < 1) throw ParameterError("dimension must be >= 1");
  std::vector<MultiIndex> out;
  MultiIndex cur(d, 0);
  if (spec.truncation == Truncation::Hyperbolic) {
    enumerate_hyperbolic(d, spec.N, 0, 1, cur, out);
    return out;
  }
  while (true) {
    out.push_back(cur);
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (cur[j] < spec.N) {
        ++cur[j];
        break;
      }
      cur[j] = 0;
      if (j == 0) return out;
    }
  }
}

/// Tensor-Chebyshev coefficients of a target on its box, in coordinates
/// y = affine image of the box onto [-1, 1]^d.
struct Expansion {
  std::size_t dim = 1;
  Box box;
  std::map<MultiIndex, double> coefficients;
};

inline constexpr double kMaxQuadratureNodes = 2.0e7;

/// Discrete cosine quadrature on the tensor grid of K = 4N+1 Chebyshev-Gauss
/// nodes per axis, transformed one axis at a time:
///   c_n = prod(eps_{n_j}) / K^d * sum f(cos theta) prod cos(n_j theta_j).
inline Expansion expand(const TargetFunction& f, const ExpansionSpec& spec) {
  const std::size_t d = f.dim;
  auto indices = index_set(spec, d);
  const int N = spec.N;
  const int K = 4 * N + 1;
  if (std::pow(static_cast<double>(K), static_cast<double>(d)) > kMaxQuadratureNodes) {
    throw ParameterError("quadrature grid (4N+1)^d exceeds " + std::to_string(static_cast<long>(kMaxQuadratureNodes)) +
                         " nodes");
  }
  std::vector<double> theta(K), nodes(K);
  for (int i = 0; i < K; ++i) {
    theta[i] = std::numbers::pi * (i + 0.5) / K;
    nodes[i] = std::cos(theta[i]);
  }

  // sample: row-major over (i_0, ..., i_{d-1})
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= K;
  std::vector<double> vals(total);
  std::vector<double> x(d);
  std::vector<int> idx(d, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (std::size_t j = d; j-- > 0;) {
      idx[j] = static_cast<int>(r % K);
      r /= K;
    }
    for (std::size_t j = 0; j < d; ++j) {
      const double lo = f.box.lo[j], hi = f.box.hi[j];
      x[j] = lo + (nodes[idx[j]] + 1.0) * 0.5 * (hi - lo);
    }
    vals[flat] = f.evaluator(x);
  }

  // cosine table and axis-by-axis transform, keeping modes 0..N
  const int modes = N + 1;
  std::vector<double> cosines(static_cast<std::size_t>(modes) * K);
  for (int k = 0; k < modes; ++k)
    for (int i = 0; i < K; ++i) cosines[k * K + i] = std::cos(k * theta[i]) * (k == 0 ? 1.0 : 2.0) / K;

  std::vector<std::size_t> shape(d, K);
  std::vector<double> cur = std::move(vals);
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t j = 0; j < axis; ++j) outer *= shape[j];
    for (std::size_t j = axis + 1; j < d; ++j) inner *= shape[j];
    std::vector<double> next(outer * modes * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (int k = 0; k < modes; ++k)
        for (int i = 0; i < K; ++i) {
          const double w = cosines[k * K + i];
          const double* src = &cur[(o * K + i) * inner];
          double* dst = &next[(o * modes + k) * inner];
          for (std::size_t t = 0; t < inner; ++t) dst[t] += w * src[t];
        }
    shape[axis] = modes;
    cur = std::move(next);
  }

  Expansion out;
  out.dim = d;
  out.box = f.box;
  for (const auto& n : indices) {
    std::size_t flat = 0;
    for (std::size_t j = 0; j < d; ++j) flat = flat * modes + n[j];
    out.coefficients[n] = cur[flat];
  }
  return out;
}

/// Evaluates the truncated expansion directly (Chebyshev values by cosine).
inline double evaluate_expansion(const Expansion& e, std::span<const double> x) {
  double s = 0.0;
  for (const auto& [n, c] : e.coefficients) {
    double term = c;
    for (std::size_t j = 0; j < e.dim; ++j) {
      const double lo = e.box.lo[j], hi = e.box.hi[j];
      const double y = std::clamp((2.0 * x[j] - lo - hi) / (hi - lo), -1.0, 1.0);
      term *= std::cos(n[j] * std::acos(y));
    }
    s += term;
  }
  return s;
}

struct ExpansionOptions {
  double prune_relative = 1e-14;  // drop |c_n| below this times max |c|
};

/// Per-axis Chebyshev pipelines (kept basis values) feeding tensor products
/// and a weighted sum. The box is mapped onto [-1, 1]^d by the first affine
/// map, so no extra layer is spent on it.
inline Network compile_expansion(const Expansion& e, const ExpansionOptions& opts = {}) {
  const std::size_t d = e.dim;
  double cmax = 0.0;
  for (const auto& [n, c] : e.coefficients) cmax = std::max(cmax, std::abs(c));
  std::vector<std::pair<MultiIndex, double>> terms;
  for (const auto& [n, c] : e.coefficients)
    if (std::abs(c) > opts.prune_relative * cmax) terms.emplace_back(n, c);

  CircuitBuilder b(d, Activation::dlu());
  std::vector<Signal> y(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double lo = e.box.lo[j], hi = e.box.hi[j];
    y[j] = (2.0 * b.input(j) - (lo + hi)) / (hi - lo);
  }

  if (d == 1) {
    std::vector<double> coeffs;
    for (const auto& [n, c] : terms) {
      if (coeffs.size() <= static_cast<std::size_t>(n[0])) coeffs.resize(n[0] + 1, 0.0);
      coeffs[n[0]] = c;
    }
    if (coeffs.empty()) coeffs.push_back(0.0);
    return b.finish(emit_polynomial(b, y[0], BasisPolynomial{Basis::Chebyshev, coeffs}, DluProductPolicy{}).value);
  }

  std::vector<int> top_degree(d, 0);
  int factors = 0;
  for (const auto& [n, c] : terms) {
    int nz = 0;
    for (std::size_t j = 0; j < d; ++j) {
      top_degree[j] = std::max(top_degree[j], n[j]);
      if (n[j] > 0) ++nz;
    }
    factors = std::max(factors, nz);
  }
  auto pipeline_depth = [](int deg) { return 2 * std::max(deg - 1, 0); };
  int top = 0;
  for (std::size_t j = 0; j < d; ++j) top = std::max(top, pipeline_depth(top_degree[j]));

  // leaves T_k(y_j) for k >= 1, all on layer `top`
  std::vector<Signal> leaves;
  std::vector<std::vector<int>> leaf_id(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (top_degree[j] == 0) continue;
    Signal yj = b.carry(y[j], top - pipeline_depth(top_degree[j]), -1.0);
    BasisPolynomial zero{Basis::Chebyshev, std::vector<double>(top_degree[j] + 1, 0.0)};
    auto basis = emit_polynomial(b, yj, zero, DluProductPolicy{}, PipelineOptions{true}).basis;
    leaf_id[j].assign(top_degree[j] + 1, -1);
    for (int k = 1; k <= top_degree[j]; ++k) {
      leaf_id[j][k] = static_cast<int>(leaves.size());
      leaves.push_back(basis[k]);
    }
  }
  if (leaves.empty()) {
    double c0 = terms.empty() ? 0.0 : terms.front().second;
    return b.finish(Signal::constant_value(c0));
  }

  ProductEngine engine(b, leaves, std::vector<double>(leaves.size(), 1.0));
  const int out_layer = top + 2 * ProductEngine::ceil_log2(std::max(factors, 1));
  Signal sum = Signal::constant_value(0.0);
  for (const auto& [n, c] : terms) {
    std::vector<int> ex(leaves.size(), 0);
    for (std::size_t j = 0; j < d; ++j)
      if (n[j] > 0) ex[leaf_id[j][n[j]]] = 1;
    sum += c * engine.get_at(ex, out_layer);
  }
  return b.finish(sum);
}

}  // namespace dluforge
