#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dluforge/approx/rational_fit.hpp"
#include "dluforge/monomial.hpp"
#include "dluforge/poly_compiler.hpp"
#include "dluforge/target.hpp"

namespace dluforge {

struct RankOneNetwork {
  Network net;
  Budget claim;
  std::vector<RationalFit> fits;
  std::vector<double> factor_errors;  // sup |R_i - f_i| on the check grid
  std::vector<double> factor_sups;    // sup |R_i|
  double telescoping_bound = 0.0;     // sum_i e_i prod_{j<i} |R_j| prod_{j>i} |f_j|
};

/// prod_i f_i(x_i) on [0, 1]^d: a type (n, n) rational fit per factor,
/// compiled exactly, then multiplied by the product tree.
inline RankOneNetwork build_rank_one_tensor(const std::vector<TargetFunction>& factors, int n,
                                            const RationalFitProvider& provider = default_rational_fit_provider()) {
  if (factors.empty()) throw ParameterError("rank-one tensor needs at least one factor");
  if (n < 0) throw ParameterError("rational degree must be >= 0");
  const std::size_t d = factors.size();
  for (const auto& f : factors) {
    if (f.dim != 1) throw ShapeError("rank-one factors must be univariate");
    if (f.box.lo[0] != 0.0 || f.box.hi[0] != 1.0) throw ParameterError("rank-one factors must live on [0, 1]");
  }

  Network placeholder(1, {}, Layer{Matrix(1, 1), {0.0}, Activation::identity()});
  RankOneNetwork out{placeholder, {}, {}, {}, {}, 0.0};
  CircuitBuilder b(d, Activation::dlu());
  std::vector<Signal> parts;
  std::vector<double> f_sups;
  for (std::size_t i = 0; i < d; ++i) {
    const auto& f = factors[i];
    auto on_sigma = [&f](double s) { return f.evaluator(std::vector<double>{(s + 1.0) / 2.0}); };
    RationalFit fit = provider(on_sigma, n);
    double rsup = 0.0, fsup = 0.0;
    for (int k = 0; k < 2001; ++k) {
      const double s = -1.0 + 2.0 * k / 2000;
      rsup = std::max(rsup, std::abs(fit.p(s) / fit.q(s)));
      fsup = std::max(fsup, std::abs(on_sigma(s)));
    }
    out.fits.push_back(fit);
    out.factor_errors.push_back(fit.fit_error);
    out.factor_sups.push_back(rsup);
    f_sups.push_back(fsup);
    Signal sigma = 2.0 * b.input(i) - 1.0;
    try {
      parts.push_back(emit_rational(b, sigma, fit.p, fit.q));
    } catch (const DomainError& e) {
      throw ConstructionError(std::string("rational factor has a pole on [0, 1]: ") + e.what());
    }
  }

  int top = 0;
  for (const auto& s : parts)
    if (!s.is_constant()) top = std::max(top, s.layer);
  std::vector<double> bounds;
  for (std::size_t i = 0; i < d; ++i) {
    const double B = out.factor_sups[i] * 1.05 + 1e-12;
    bounds.push_back(B);
    parts[i] = b.carry(parts[i], top, -2.0 * B);
  }
  ProductEngine engine(b, parts, bounds);
  out.net = b.finish(engine.get(std::vector<int>(d, 1)));

  for (std::size_t i = 0; i < d; ++i) {
    double term = out.factor_errors[i];
    for (std::size_t j = 0; j < i; ++j) term *= out.factor_sups[j];
    for (std::size_t j = i + 1; j < d; ++j) term *= f_sups[j];
    out.telescoping_bound += term;
  }

  const long dd = static_cast<long>(d);
  const double lg = std::log2(static_cast<double>(d));
  const double extra = d > 2 ? 90.0 * lg * std::log2(lg) : 0.0;
  out.claim = {2L * ProductEngine::ceil_log2(static_cast<int>(d)) + 2L * n + 3, 12L * dd,
               static_cast<long>(std::floor(122.0 * n * dd + extra + 51.0 * dd))};
  return out;
}

}  // namespace dluforge
