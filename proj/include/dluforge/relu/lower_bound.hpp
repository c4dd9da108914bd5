#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "dluforge/error.hpp"

namespace dluforge {

struct LowerBound {
  double m = 0.0;              // breakpoint budget used
  std::string m_formula;       // which count formula produced m
  bool overflow = false;       // m beyond 2^53; bounds reported as 0
  double stated = 0.0;         // (1/2 - 2^{-k}) (m+1)^{-k}
  double certified = 0.0;      // half of the stated form, see below
  double generic = 0.0;        // uniform-partition certificate, when computed
  bool uniform_partition = false;
  std::string label;
};

inline constexpr double kMaxExactCount = 9007199254740992.0;  // 2^53

/// m = 3^L W^L, the count used for depth L, width W.
inline double breakpoint_budget(int L, int W, bool& overflow) {
  if (L < 1 || W < 1) throw ParameterError("L and W must be >= 1");
  const double m = std::pow(3.0 * W, static_cast<double>(L));
  overflow = !(m < kMaxExactCount);
  return m;
}

/// Lower bound on sup |x^k - Phi| over ReLU nets of depth L and width W.
/// `stated` is the closed form with the uniform partition. Each linear piece
/// on an interval of length h misses x^k by at least half the midpoint gap,
/// (1/2)(1/2 - 2^{-k}) h^k, and some interval has h >= 1/(m+1); that gives
/// `certified`. For k = 2 the best linear fit on length h misses by h^2/8
/// exactly, so the certified form is also attained there.
inline LowerBound lower_bound_power(int k, int L, int W) {
  if (k < 2) throw ParameterError("power lower bound needs k >= 2");
  LowerBound out;
  out.m = breakpoint_budget(L, W, out.overflow);
  out.m_formula = "3^L W^L";
  out.label = "closed form for x^k";
  if (out.overflow) return out;
  const double core = (0.5 - std::ldexp(1.0, -k)) * std::pow(out.m + 1.0, -static_cast<double>(k));
  out.stated = core;
  out.certified = core / 2.0;
  return out;
}

inline constexpr double kMaxCertificateIntervals = 1.0e6;

/// Uniform-partition certificate for a convex f on [0, 1]: on each of the
/// m + 1 equal intervals, half the largest chord-minus-f gap, which is the
/// best linear fit error there. A lower bound on the infimum over partitions
/// only when the uniform partition is optimal. Past 1e6 intervals a strided
/// subset is used, which can only lower the value.
inline double uniform_partition_certificate(const std::function<double(double)>& f, double m) {
  if (!(m >= 0.0)) throw ParameterError("breakpoint count must be >= 0");
  const double intervals = m + 1.0;
  const double h = 1.0 / intervals;
  const long count = static_cast<long>(std::min(intervals, kMaxCertificateIntervals));
  const double stride = intervals / count;
  double best = 0.0;
  for (long j = 0; j < count; ++j) {
    const double i = std::floor(j * stride);
    const double a = i * h, b = std::min(1.0, a + h);
    const double fa = f(a), fb = f(b);
    auto gap = [&](double x) { return fa + (fb - fa) * (x - a) / (b - a) - f(x); };
    // chord - f is concave for convex f: ternary search
    double lo = a, hi = b;
    for (int it = 0; it < 100; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (gap(m1) < gap(m2)) lo = m1;
      else hi = m2;
    }
    best = std::max(best, gap((lo + hi) / 2.0) / 2.0);
  }
  return best;
}

inline LowerBound lower_bound_certificate(const std::function<double(double)>& f, int L, int W) {
  LowerBound out;
  out.m = breakpoint_budget(L, W, out.overflow);
  out.m_formula = "3^L W^L";
  out.uniform_partition = true;
  out.label = "certificate under uniform-partition optimality";
  if (out.overflow) return out;
  out.generic = uniform_partition_certificate(f, out.m);
  return out;
}

}  // namespace dluforge
