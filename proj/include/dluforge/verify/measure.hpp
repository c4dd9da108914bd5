#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dluforge/network.hpp"
#include "dluforge/target.hpp"

namespace dluforge {

enum class NormKind { Sup, L1, L2, Lp };

struct NormSpec {
  NormKind kind = NormKind::Sup;
  double p = 0.0;         // only read for Lp
  bool weighted = false;  // w(y) = 2^d prod (1 - y_j^2)^{-1/2} on the box mapped to [-1, 1]^d

  static NormSpec sup() { return {NormKind::Sup, 0.0, false}; }
  static NormSpec l1() { return {NormKind::L1, 1.0, false}; }
  static NormSpec l2() { return {NormKind::L2, 2.0, false}; }
  static NormSpec lp(double p) { return {NormKind::Lp, p, false}; }
  double exponent() const { return kind == NormKind::L1 ? 1.0 : kind == NormKind::L2 ? 2.0 : p; }
  friend bool operator==(const NormSpec&, const NormSpec&) = default;
};

inline std::string to_string(const NormSpec& n) {
  std::string s;
  switch (n.kind) {
    case NormKind::Sup: s = "sup"; break;
    case NormKind::L1: s = "l1"; break;
    case NormKind::L2: s = "l2"; break;
    case NormKind::Lp: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "l%.17g", n.p);
      s = buf;
      break;
    }
  }
  return n.weighted ? "weighted-" + s : s;
}

/// "sup", "l1", "l2", "lp:3" or "l3", with an optional "weighted-" prefix.
inline NormSpec norm_from_string(std::string_view text) {
  NormSpec n;
  if (text.starts_with("weighted-")) {
    n.weighted = true;
    text.remove_prefix(9);
  }
  if (text == "sup" || text == "linf") {
    n.kind = NormKind::Sup;
  } else if (text == "l1") {
    n = {NormKind::L1, 1.0, n.weighted};
  } else if (text == "l2") {
    n = {NormKind::L2, 2.0, n.weighted};
  } else if (text.size() > 1 && text[0] == 'l') {
    std::string rest(text.substr(text[1] == 'p' ? 2 : 1));
    if (!rest.empty() && rest[0] == ':') rest.erase(0, 1);
    char* end = nullptr;
    const double p = std::strtod(rest.c_str(), &end);
    if (rest.empty() || *end != '\0') throw ParameterError("unknown norm '" + std::string(text) + "'");
    n.kind = NormKind::Lp;
    n.p = p;
  } else {
    throw ParameterError("unknown norm '" + std::string(text) + "'");
  }
  if (n.kind != NormKind::Sup && n.exponent() < 1.0) throw ParameterError("L_p norm needs p >= 1");
  return n;
}

enum class GridKind { Uniform, MonteCarlo, Chebyshev };

inline std::string_view to_string(GridKind g) {
  switch (g) {
    case GridKind::Uniform: return "uniform";
    case GridKind::MonteCarlo: return "monte-carlo";
    case GridKind::Chebyshev: return "chebyshev";
  }
  return "?";
}

inline GridKind grid_kind_from_string(std::string_view s) {
  if (s == "uniform") return GridKind::Uniform;
  if (s == "monte-carlo" || s == "mc") return GridKind::MonteCarlo;
  if (s == "chebyshev") return GridKind::Chebyshev;
  throw ParameterError("unknown grid kind '" + std::string(s) + "'");
}

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

struct GridSpec {
  GridKind kind = GridKind::Uniform;
  long points = 10000;                // total; tensor grids round to a per-axis count
  std::optional<std::uint64_t> seed;  // Monte-Carlo only

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// 10^4 uniform points for d <= 2, 10^5 Monte-Carlo samples otherwise.
inline GridSpec default_grid(std::size_t dim, std::uint64_t seed = kDefaultSeed) {
  if (dim <= 2) return {GridKind::Uniform, 10000, std::nullopt};
  return {GridKind::MonteCarlo, 100000, seed};
}

struct ErrorReport {
  std::string target_name;
  std::string network_id;
  NormSpec norm;
  double measured_error = 0.0;
  std::optional<double> theoretical_bound;
  GridSpec grid;
  StructuralAudit audit;
  bool budget_claimed = false;            // audit.claimed_* meaningful
  std::optional<double> standard_error;   // Monte-Carlo, of the ||e||_p^p estimate

  friend bool operator==(const ErrorReport&, const ErrorReport&) = default;
};

/// Structural audit without a claim: the claimed fields stay 0.
inline StructuralAudit structure_of(const Network& net) {
  StructuralAudit a;
  a.depth = net.depth();
  a.width = net.width();
  a.nonzero_weights = net.nonzero_weights();
  a.within_budget = true;
  return a;
}

namespace detail {

inline long per_axis(long points, std::size_t d) {
  long k = static_cast<long>(std::llround(std::pow(static_cast<double>(points), 1.0 / static_cast<double>(d))));
  while (std::pow(static_cast<double>(k), static_cast<double>(d)) < static_cast<double>(points) * (1.0 - 1e-12)) ++k;
  return std::max(k, 2L);
}

inline double box_volume(const Box& b) {
  double v = 1.0;
  for (std::size_t j = 0; j < b.dim(); ++j) v *= b.hi[j] - b.lo[j];
  return v;
}

}  // namespace detail

/// Error of net against target. Deterministic for a given grid (and seed).
/// sup: max over the grid. L_p: trapezoid weights on uniform grids, the
/// sample mean times the volume for Monte-Carlo, Gauss-Chebyshev weights on
/// Chebyshev grids (exact for the weight w, which is why weighted norms
/// require that grid).
inline ErrorReport measure_error(const Network& net, const TargetFunction& target, const NormSpec& norm,
                                 const GridSpec& grid, std::string network_id = {},
                                 const std::optional<Budget>& claim = std::nullopt) {
  const std::size_t d = target.dim;
  if (net.input_dim() != d) {
    throw ShapeError("network has " + std::to_string(net.input_dim()) + " inputs but target '" + target.name +
                     "' has dimension " + std::to_string(d));
  }
  if (net.output_dim() != 1) throw ShapeError("measure_error needs a scalar network");
  if (norm.kind != NormKind::Sup && !(norm.exponent() >= 1.0)) throw ParameterError("L_p norm needs p >= 1");
  if (grid.points < 2) throw ParameterError("grid needs at least 2 points");
  if (norm.weighted && grid.kind != GridKind::Chebyshev) {
    throw ParameterError("weighted norms need a chebyshev grid");
  }
  if (grid.kind == GridKind::MonteCarlo && !grid.seed) throw ParameterError("monte-carlo grids need a seed");

  ErrorReport r;
  r.target_name = target.name;
  r.network_id = std::move(network_id);
  r.norm = norm;
  r.grid = grid;
  if (claim) {
    r.audit = audit(net, *claim);
    r.budget_claimed = true;
  } else {
    r.audit = structure_of(net);
  }

  const double p = norm.kind == NormKind::Sup ? 0.0 : norm.exponent();
  double sup = 0.0, acc = 0.0, acc2 = 0.0;
  std::vector<double> x(d);
  auto accumulate = [&](double w) {
    const double e = std::abs(net(x) - target(x));
    if (!std::isfinite(e)) throw DomainError("non-finite error at a grid point");
    sup = std::max(sup, e);
    if (p > 0.0) {
      const double v = std::pow(e, p);
      acc += w * v;
      acc2 += w * v * v;
    }
  };

  const double vol = detail::box_volume(target.box);
  if (grid.kind == GridKind::MonteCarlo) {
    std::mt19937_64 rng(*grid.seed);
    for (long s = 0; s < grid.points; ++s) {
      for (std::size_t j = 0; j < d; ++j) {
        x[j] = std::uniform_real_distribution<double>(target.box.lo[j], target.box.hi[j])(rng);
      }
      accumulate(1.0);
    }
    if (p > 0.0) {
      const double n = static_cast<double>(grid.points);
      const double mean = acc / n;
      const double var = std::max(0.0, acc2 / n - mean * mean);
      r.standard_error = vol * std::sqrt(var / (n - 1.0));
      acc = vol * mean;
    }
  } else {
    const long K = detail::per_axis(grid.points, d);
    std::vector<double> nodes(K), weights(K);
    for (long i = 0; i < K; ++i) {
      if (grid.kind == GridKind::Uniform) {
        nodes[i] = static_cast<double>(i) / (K - 1);  // on [0, 1]
        weights[i] = (i == 0 || i == K - 1 ? 0.5 : 1.0) / (K - 1);
      } else {
        nodes[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * (i + 0.5) / K));
        weights[i] = std::numbers::pi / K;  // Gauss-Chebyshev, for the weighted integral on [-1, 1]
      }
    }
    std::vector<long> idx(d, 0);
    long total = 1;
    for (std::size_t j = 0; j < d; ++j) total *= K;
    for (long flat = 0; flat < total; ++flat) {
      long rem = flat;
      double w = 1.0;
      for (std::size_t j = d; j-- > 0;) {
        idx[j] = rem % K;
        rem /= K;
        x[j] = target.box.lo[j] + (target.box.hi[j] - target.box.lo[j]) * nodes[idx[j]];
        w *= weights[idx[j]];
      }
      accumulate(w);
    }
    if (p > 0.0) {
      if (grid.kind == GridKind::Chebyshev && norm.weighted) {
        // int w(y) g(y) dy over [-1,1]^d = 2^d prod(pi/K) sum g(y_k)
        acc *= std::pow(2.0, static_cast<double>(d));
      } else if (grid.kind == GridKind::Chebyshev) {
        // unweighted on Chebyshev nodes: divide the weight back out, sqrt(1-y^2) per axis
        acc = 0.0;
        for (long flat = 0; flat < total; ++flat) {
          long rem = flat;
          double w = 1.0;
          for (std::size_t j = d; j-- > 0;) {
            idx[j] = rem % K;
            rem /= K;
            const double y = 2.0 * nodes[idx[j]] - 1.0;
            x[j] = target.box.lo[j] + (target.box.hi[j] - target.box.lo[j]) * nodes[idx[j]];
            w *= weights[idx[j]] * std::sqrt(1.0 - y * y) * 0.5 * (target.box.hi[j] - target.box.lo[j]);
          }
          acc += w * std::pow(std::abs(net(x) - target(x)), p);
        }
      } else {
        acc *= vol;
      }
    }
  }
  r.measured_error = p > 0.0 ? std::pow(acc, 1.0 / p) : sup;
  return r;
}

}  // namespace dluforge
