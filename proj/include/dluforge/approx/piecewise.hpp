#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dluforge/circuit.hpp"
#include "dluforge/gadgets.hpp"
#include "dluforge/target.hpp"

namespace dluforge {

/// Depth-0 network returning c.
inline Network constant_network(std::size_t dim, double c) {
  return Network(dim, {}, Layer{Matrix(1, dim), {c}, Activation::identity()});
}

/// Depth-0 network returning scale * x_i + shift.
inline Network coordinate_network(std::size_t dim, std::size_t i, double scale = 1.0, double shift = 0.0) {
  if (i >= dim) throw ShapeError("coordinate index out of range");
  Matrix w(1, dim);
  w(0, i) = scale;
  return Network(dim, {}, Layer{w, {shift}, Activation::identity()});
}

enum class IndicatorMode {
  Direct,            // chi~_n(p~ - h~), exactly 1 where n(p~ - h~) >= 1
  SurrogateClamped,  // chi~_n(rho~(p~ - h~)), rho~(z) = rho(n z)/n
};

struct PiecewiseParts {
  std::optional<Network> f1, f2, h, p;
};

struct PiecewiseOptions {
  IndicatorMode mode = IndicatorMode::Direct;
  std::optional<double> f2_bound;  // sup |f2~|; estimated on a grid when absent
  int bound_grid = 2001;           // samples for the estimate (per axis in 1-D, total otherwise)
};

struct PiecewiseNetwork {
  Network net;
  double product_bound = 0.0;  // M of the product gate
  int indicator_layer = 0;
  double shift = 0.0;  // K of the exact-plateau shift (direct mode)
};

namespace detail {

inline double estimate_sup(const Network& net, const Box& box, int samples) {
  const std::size_t d = box.dim();
  double m = 0.0;
  std::vector<double> x(d);
  if (d == 1) {
    for (int i = 0; i < samples; ++i) {
      x[0] = box.lo[0] + (box.hi[0] - box.lo[0]) * i / (samples - 1);
      m = std::max(m, std::abs(net(x)));
    }
    return m;
  }
  std::mt19937_64 rng(0x5EED);
  for (int i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < d; ++j) x[j] = std::uniform_real_distribution<double>(box.lo[j], box.hi[j])(rng);
    m = std::max(m, std::abs(net(x)));
  }
  // corners too
  for (std::size_t c = 0; c < (std::size_t{1} << std::min<std::size_t>(d, 12)); ++c) {
    for (std::size_t j = 0; j < d; ++j) x[j] = (c >> j) & 1 ? box.hi[j] : box.lo[j];
    m = std::max(m, std::abs(net(x)));
  }
  return m;
}

}  // namespace detail

/// f1 + f2 chi_Omega with Omega = {h <= p}, from approximant networks of the
/// four parts. Inputs are delayed through exact identity carries (inputs are
/// >= the box corner) so that p - h, f2 and f1 land on the layers where they
/// are consumed: chi sits on layer T next to f2, their product and f1 on T+2.
inline PiecewiseNetwork build_piecewise(const PiecewiseParts& parts, long n, const Box& box,
                                        const PiecewiseOptions& opts = {}) {
  if (!parts.f1 || !parts.f2 || !parts.h || !parts.p) throw ParameterError("piecewise needs f1, f2, h and p");
  if (n < 1) throw ParameterError("sharpness n must be >= 1");
  const std::size_t d = box.dim();
  for (const Network* c : {&*parts.f1, &*parts.f2, &*parts.h, &*parts.p}) {
    if (c->input_dim() != d) throw ShapeError("piecewise component input dimension does not match the box");
    if (c->output_dim() != 1) throw ShapeError("piecewise components must be scalar");
  }

  const int chi_depth = 2;
  const int dph = static_cast<int>(std::max(parts.p->depth(), parts.h->depth()));
  const int T = std::max({static_cast<int>(parts.f2->depth()), dph + chi_depth,
                          static_cast<int>(parts.f1->depth()) - 2});

  CircuitBuilder b(d, Activation::dlu());
  auto delayed = [&](int to) {
    std::vector<Signal> xs;
    for (std::size_t j = 0; j < d; ++j) xs.push_back(b.carry(b.input(j), to, box.lo[j]));
    return xs;
  };
  auto place = [&](const Network& net, int end) {
    return b.embed(net, delayed(end - static_cast<int>(net.depth()))).front();
  };

  PiecewiseNetwork out{constant_network(d, 0.0), 0.0, T};
  Signal f2 = place(*parts.f2, T);
  Signal f1 = place(*parts.f1, T + 2);
  Signal sum = f1;
  if (!(f2.is_constant() && f2.constant == 0.0)) {
    const int zl = T - chi_depth;
    Signal z = place(*parts.p, zl) - place(*parts.h, zl);
    const double k = static_cast<double>(n);
    Signal chi;
    if (opts.mode == IndicatorMode::SurrogateClamped) {
      z = b.neuron(k * z) / k;
      chi = b.neuron(k * z) - b.neuron(k * z - 1.0);
    } else {
      // shift t = n z up by an integer K >= n sup|z| so that rho(t + K) = t + K,
      // then t + K - K and t + K - K - 1 are exact float subtractions for t >= 1
      // and chi comes out as exactly 1 there
      double zsup = 0.0;
      {
        CircuitBuilder zb(d, Activation::dlu());
        std::vector<Signal> xs;
        for (std::size_t j = 0; j < d; ++j) xs.push_back(zb.input(j));
        Signal zz = zb.embed(*parts.p, xs).front() - zb.embed(*parts.h, xs).front();
        zsup = detail::estimate_sup(zb.finish(zz), box, opts.bound_grid);
      }
      const double K = std::ceil(k * (1.05 * zsup) + 1.0);
      out.shift = K;
      Signal N = b.neuron(k * z + K);
      chi = b.neuron(N - K) - b.neuron(N - (K + 1.0));
    }
    chi = b.carry(chi, T, 0.0);  // chi >= 0
    if (f2.is_constant()) {
      sum += f2.constant * chi;
    } else {
      out.product_bound = std::max(opts.f2_bound ? *opts.f2_bound
                                                 : 1.05 * detail::estimate_sup(*parts.f2, box, opts.bound_grid) + 1e-9,
                                   1.0);
      sum += emit_product_compact(b, f2, chi, out.product_bound);
    }
  }
  out.net = b.finish(sum);
  return out;
}

/// Closed-form chi~_n: rho(n z) - rho(n z - 1).
inline double indicator_value(double z, long n) {
  const double k = static_cast<double>(n);
  return dlu(k * z) - dlu(k * z - 1.0);
}

struct PiecewiseErrorTerms {
  double p = 2.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double measured = 0.0;            // ||Phi - f||_p
  double smooth_f1 = 0.0;           // ||f1~ - f1||_p
  double smooth_f2 = 0.0;           // ||f2~ - f2||_p
  double surrogate_mismatch = 0.0;  // sup|f2| ||chi~(p~ - h~) - chi~(p - h)||_p
  double transition = 0.0;          // sup|f2| ||chi~(p - h) - chi_Omega||_p
  double band_volume = 0.0;         // fraction of samples with |p - h| < 1/n
  double standard_error = 0.0;      // of the measured ||.||_p^p estimate
  double bound() const { return smooth_f1 + smooth_f2 + surrogate_mismatch + transition; }
};

/// Monte-Carlo L_p split of Phi - (f1 + f2 chi_Omega). All norms are taken
/// on the same samples, so the triangle inequality holds for the estimates
/// themselves: measured <= bound() always. Direct mode only.
inline PiecewiseErrorTerms piecewise_error_terms(const PiecewiseNetwork& phi, const PiecewiseParts& nets,
                                                 const TargetFunction& f1, const TargetFunction& f2,
                                                 const TargetFunction& h, const TargetFunction& p, long n, double norm_p,
                                                 std::size_t samples, std::uint64_t seed) {
  if (norm_p < 1.0) throw ParameterError("L_p needs p >= 1");
  if (samples < 2) throw ParameterError("need at least 2 samples");
  const Box& box = f1.box;
  const std::size_t d = box.dim();
  std::mt19937_64 rng(seed);
  std::vector<double> x(d);
  std::vector<double> e_all(samples), e1(samples), e2(samples), eb(samples), et(samples);
  double f2sup = 0.0;
  std::size_t band = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < d; ++j) x[j] = std::uniform_real_distribution<double>(box.lo[j], box.hi[j])(rng);
    const double z = p(x) - h(x);
    const double zt = (*nets.p)(x) - (*nets.h)(x);
    const double chi = z >= 0.0 ? 1.0 : 0.0;
    const double truth = f1(x) + f2(x) * chi;
    f2sup = std::max(f2sup, std::abs(f2(x)));
    e_all[s] = std::abs(phi.net(x) - truth);
    e1[s] = std::abs((*nets.f1)(x) - f1(x));
    e2[s] = std::abs((*nets.f2)(x) - f2(x));
    eb[s] = std::abs(indicator_value(zt, n) - indicator_value(z, n));
    et[s] = std::abs(indicator_value(z, n) - chi);
    if (std::abs(z) < 1.0 / n) ++band;
  }
  auto lp = [&](const std::vector<double>& v) {
    double acc = 0.0;
    for (double a : v) acc += std::pow(a, norm_p);
    return std::pow(acc / samples, 1.0 / norm_p);
  };
  PiecewiseErrorTerms t;
  t.p = norm_p;
  t.samples = samples;
  t.seed = seed;
  t.measured = lp(e_all);
  t.smooth_f1 = lp(e1);
  t.smooth_f2 = lp(e2);
  t.surrogate_mismatch = f2sup * lp(eb);
  t.transition = f2sup * lp(et);
  t.band_volume = static_cast<double>(band) / samples;
  double mean = 0.0, sq = 0.0;
  for (double a : e_all) {
    const double v = std::pow(a, norm_p);
    mean += v;
    sq += v * v;
  }
  mean /= samples;
  t.standard_error = std::sqrt(std::max(0.0, sq / samples - mean * mean) / (samples - 1));
  return t;
}

}  // namespace dluforge
