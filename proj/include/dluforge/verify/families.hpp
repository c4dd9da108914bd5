#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dluforge/approx/bernstein.hpp"
#include "dluforge/approx/exp_abs.hpp"
#include "dluforge/approx/expansion.hpp"
#include "dluforge/approx/piecewise.hpp"
#include "dluforge/approx/rank_one.hpp"
#include "dluforge/gates.hpp"
#include "dluforge/monomial.hpp"
#include "dluforge/poly_compiler.hpp"
#include "dluforge/relu/yarotsky.hpp"
#include "dluforge/verify/measure.hpp"

namespace dluforge {

/// String-valued construction parameters as they come off the command line.
class Params {
 public:
  Params() = default;
  Params(std::initializer_list<std::pair<const std::string, std::string>> v) : values_(v) {}

  void set(const std::string& k, const std::string& v) { values_[k] = v; }
  bool has(const std::string& k) const { return values_.count(k) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string str(const std::string& k, const std::string& def) const {
    auto it = values_.find(k);
    return it == values_.end() ? def : it->second;
  }
  double real(const std::string& k, double def) const {
    auto it = values_.find(k);
    return it == values_.end() ? def : parse_real(k, it->second);
  }
  int integer(const std::string& k, int def) const {
    const double v = real(k, def);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ParameterError("parameter " + k + " must be an integer");
    return static_cast<int>(v);
  }
  std::vector<double> reals(const std::string& k, const std::string& def) const {
    std::vector<double> out;
    std::stringstream ss(str(k, def));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(k, item));
    if (out.empty()) throw ParameterError("parameter " + k + " needs at least one value");
    return out;
  }
  std::vector<std::string> words(const std::string& k, const std::string& def) const {
    std::vector<std::string> out;
    std::stringstream ss(str(k, def));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  }

 private:
  static double parse_real(const std::string& k, const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ParameterError("parameter " + k + ": cannot read '" + s + "' as a number");
    }
  }
  std::map<std::string, std::string> values_;
};

/// How a family's theoretical bound is used: asserted bounds gate the exit
/// code, reported ones ride along in the report only.
enum class BoundKind { None, Asserted, Reported };

struct FamilyInstance {
  Network net;
  std::string id;
  std::optional<Budget> claim;
  std::optional<double> bound;
  BoundKind bound_kind = BoundKind::None;
  std::optional<TargetFunction> target;  // the function the family approximates
  std::vector<std::string> notes;
};

struct ParamInfo {
  std::string name;
  std::string default_value;
  std::string help;
};

struct Family {
  std::string name;
  std::string description;
  std::vector<ParamInfo> params;
  std::function<FamilyInstance(const Params&)> build;
};

/// Bound slack for exact constructions: measured <= max(1e-10, bound).
inline constexpr double kExactSlack = 1e-10;

inline bool bound_violated(BoundKind kind, const std::optional<double>& bound, double measured) {
  return kind == BoundKind::Asserted && bound && measured > std::max(kExactSlack, *bound);
}
inline bool bound_violated(const FamilyInstance& f, double measured) {
  return bound_violated(f.bound_kind, f.bound, measured);
}

namespace detail {

inline FamilyInstance instance(Network net, std::string id) {
  FamilyInstance f{std::move(net), std::move(id), std::nullopt, std::nullopt, BoundKind::None, std::nullopt, {}};
  return f;
}

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_g(v[i]);
  return s;
}

inline void exact(FamilyInstance& f) {
  f.bound = 0.0;
  f.bound_kind = BoundKind::Asserted;
}

// A named target re-boxed onto [0, 1]^d (same formula), or a constant, or x<i>.
inline TargetFunction part_target(const std::string& spec, std::size_t d) {
  Box unit = Box::cube(d, 0.0, 1.0);
  if (spec.size() > 1 && spec[0] == 'x' && std::isdigit(static_cast<unsigned char>(spec[1]))) {
    const std::size_t i = std::stoul(spec.substr(1));
    if (i >= d) throw ParameterError("coordinate " + spec + " out of range");
    return make_target(spec, unit, [i](std::span<const double> x) { return x[i]; });
  }
  try {
    std::size_t used = 0;
    const double c = std::stod(spec, &used);
    if (used == spec.size()) return make_target(spec, unit, [c](std::span<const double>) { return c; });
  } catch (const std::invalid_argument&) {
  }
  TargetFunction t = target_by_name(spec);
  if (t.dim != d) throw ParameterError("target '" + spec + "' has the wrong dimension for this piecewise build");
  return make_target(spec, unit, t.evaluator);
}

inline Network part_network(const std::string& spec, const TargetFunction& t, int N) {
  const std::size_t d = t.dim;
  if (spec.size() > 1 && spec[0] == 'x' && std::isdigit(static_cast<unsigned char>(spec[1]))) {
    return coordinate_network(d, std::stoul(spec.substr(1)));
  }
  try {
    std::size_t used = 0;
    const double c = std::stod(spec, &used);
    if (used == spec.size()) return constant_network(d, c);
  } catch (const std::invalid_argument&) {
  }
  return compile_expansion(expand(t, {Truncation::MaxNorm, N}));
}

}  // namespace detail

inline const std::vector<Family>& families() {
  static const std::vector<Family> table = [] {
    std::vector<Family> t;
    t.push_back({"square", "x^2 on [-1, 1], exact", {}, [](const Params&) {
                   auto f = detail::instance(square_gate(), "square");
                   f.claim = Budget{2, 3, 13};
                   f.target = target_by_name("square_sym");
                   detail::exact(f);
                   return f;
                 }});
    t.push_back({"product", "xy on [-M, M]^2, exact", {{"M", "1", "domain bound"}}, [](const Params& p) {
                   const double M = p.real("M", 1.0);
                   auto f = detail::instance(product_gate(M), "product(M=" + detail::fmt_g(M) + ")");
                   f.claim = Budget{2, 9, 45};
                   f.target = make_target("product", Box::cube(2, -M, M),
                                          [](std::span<const double> x) { return x[0] * x[1]; });
                   detail::exact(f);
                   return f;
                 }});
    t.push_back({"division", "y/x for x in [a, M], y in [-M, M]; inputs (x, y)",
                 {{"a", "0.5", "lower bound of x"}, {"M", "2", "upper bound"}}, [](const Params& p) {
                   const double a = p.real("a", 0.5), M = p.real("M", 2.0);
                   auto f = detail::instance(division_gate(a, M),
                                             "division(a=" + detail::fmt_g(a) + ",M=" + detail::fmt_g(M) + ")");
                   f.claim = Budget{3, 9, 51};
                   f.target = make_target("division", Box{{a, -M}, {M, M}},
                                          [](std::span<const double> x) { return x[1] / x[0]; });
                   detail::exact(f);
                   return f;
                 }});
    t.push_back({"reciprocal", "1/x on [a, a + 10]", {{"a", "0.5", "threshold"}}, [](const Params& p) {
                   const double a = p.real("a", 0.5);
                   auto f = detail::instance(reciprocal_gate(a), "reciprocal(a=" + detail::fmt_g(a) + ")");
                   f.claim = Budget{1, 1, 4};
                   f.target = make_target_1d("reciprocal", a, a + 10.0, [](double x) { return 1.0 / x; });
                   detail::exact(f);
                   return f;
                 }});
    t.push_back({"identity", "x on [lb, lb + 2] through two DLU layers", {{"lb", "-1", "lower bound"}},
                 [](const Params& p) {
                   const double lb = p.real("lb", -1.0);
                   auto f = detail::instance(identity_gadget(lb), "identity(lb=" + detail::fmt_g(lb) + ")");
                   f.claim = Budget{2, 1, 5};
                   f.target = make_target_1d("identity", lb, lb + 2.0, [](double x) { return x; });
                   detail::exact(f);
                   return f;
                 }});
    t.push_back({"relu_surrogate", "rho^(m)(n x)/n against ReLU on [-10, 10]",
                 {{"n", "1", "inner scale"}, {"m", "1", "compositions"}}, [](const Params& p) {
                   const int n = p.integer("n", 1), m = p.integer("m", 1);
                   auto f = detail::instance(relu_surrogate(n, m),
                                             "relu_surrogate(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")");
                   f.claim = Budget{m, 1, m + 1L};
                   f.bound = 1.0 / (static_cast<double>(n) * m);
                   f.bound_kind = BoundKind::Asserted;
                   f.target = make_target_1d("relu", -10.0, 10.0, [](double x) { return relu(x); });
                   return f;
                 }});
    t.push_back({"indicator", "rho(n x) - rho(n x - 1) against the step at 0", {{"n", "10", "sharpness"}},
                 [](const Params& p) {
                   const int n = p.integer("n", 10);
                   auto f = detail::instance(indicator_gadget(n), "indicator(n=" + std::to_string(n) + ")");
                   f.claim = Budget{1, 2, 5};
                   f.target = make_target_1d("step_at_0", -1.0, 1.0, [](double x) { return x >= 0.0 ? 1.0 : 0.0; });
                   return f;
                 }});
    t.push_back({"poly", "polynomial on [-1, 1] from basis coefficients",
                 {{"coeffs", "0,0,1", "coefficients c_0,...,c_n"}, {"basis", "legendre", "legendre|chebyshev|monomial"}},
                 [](const Params& p) {
                   BasisPolynomial poly{basis_from_string(p.str("basis", "legendre")), p.reals("coeffs", "0,0,1")};
                   auto f = detail::instance(compile_polynomial(poly), "poly(" + std::string(to_string(poly.basis)) +
                                                                           ":" + detail::join(poly.coefficients) + ")");
                   f.claim = polynomial_budget(std::max(poly.degree(), 1));
                   f.target = make_target_1d("poly", -1.0, 1.0, [poly](double x) { return poly(x); });
                   detail::exact(f);
                   return f;
                 }});
    t.push_back({"rational", "p/q on [-1, 1], q without roots there",
                 {{"p", "1", "numerator coefficients"},
                  {"q", "2,1", "denominator coefficients"},
                  {"basis", "chebyshev", "legendre|chebyshev|monomial"}},
                 [](const Params& pr) {
                   const Basis basis = basis_from_string(pr.str("basis", "chebyshev"));
                   BasisPolynomial p{basis, pr.reals("p", "1")}, q{basis, pr.reals("q", "2,1")};
                   auto f = detail::instance(compile_rational(p, q), "rational(" + detail::join(p.coefficients) + "/" +
                                                                         detail::join(q.coefficients) + ")");
                   f.claim = rational_budget(std::max(p.degree(), 1), std::max(q.degree(), 1));
                   f.target = make_target_1d("rational", -1.0, 1.0, [p, q](double x) { return p(x) / q(x); });
                   detail::exact(f);
                   return f;
                 }});
    t.push_back({"exp", "exp(-|x|_1) on [-30, 30]^d", {{"n", "4", "denominator degree"}, {"dim", "1", "d"}},
                 [](const Params& p) {
                   const int n = p.integer("n", 4), d = p.integer("dim", 1);
                   auto e = build_exp_abs(n, d);
                   auto f = detail::instance(e.net, "exp(n=" + std::to_string(n) + ",d=" + std::to_string(d) + ")");
                   f.claim = e.claim;
                   f.bound = e.theoretical_bound;
                   f.bound_kind = BoundKind::Reported;
                   f.target = d == 1 ? target_by_name("exp_abs")
                                     : make_target("exp_l1_" + std::to_string(d), Box::cube(d, -30.0, 30.0),
                                                   [](std::span<const double> x) {
                                                     double s = 0.0;
                                                     for (double v : x) s += std::abs(v);
                                                     return std::exp(-s);
                                                   });
                   return f;
                 }});
    t.push_back({"expansion", "truncated tensor Chebyshev expansion of a named target",
                 {{"target", "exp", "registry name"}, {"trunc", "cube", "cube|hyperbolic"}, {"N", "8", "truncation"}},
                 [](const Params& p) {
                   const std::string name = p.str("target", "exp");
                   const std::string trunc = p.str("trunc", "cube");
                   ExpansionSpec spec;
                   if (trunc == "cube") spec.truncation = Truncation::MaxNorm;
                   else if (trunc == "hyperbolic") spec.truncation = Truncation::Hyperbolic;
                   else throw ParameterError("trunc must be cube or hyperbolic");
                   spec.N = p.integer("N", 8);
                   TargetFunction target = target_by_name(name);
                   auto f = detail::instance(compile_expansion(expand(target, spec)),
                                             "expansion(" + name + "," + trunc + ",N=" + std::to_string(spec.N) + ")");
                   f.target = target;
                   f.notes.push_back("no concrete budget: the weight claim carries an unspecified constant");
                   return f;
                 }});
    t.push_back({"rank_one", "prod_i f_i(x_i) on [0, 1]^d from rational fits",
                 {{"factors", "abs_half,square", "1-D targets on [0, 1]"}, {"n", "8", "rational type (n, n)"}},
                 [](const Params& p) {
                   std::vector<TargetFunction> factors;
                   for (const auto& w : p.words("factors", "abs_half,square")) factors.push_back(target_by_name(w));
                   const int n = p.integer("n", 8);
                   auto r = build_rank_one_tensor(factors, n);
                   auto f = detail::instance(r.net, "rank_one(" + p.str("factors", "abs_half,square") +
                                                        ",n=" + std::to_string(n) + ")");
                   f.claim = r.claim;
                   f.bound = r.telescoping_bound;
                   f.bound_kind = BoundKind::Reported;
                   f.target = make_target("rank_one", Box::cube(factors.size(), 0.0, 1.0),
                                          [factors](std::span<const double> x) {
                                            double v = 1.0;
                                            for (std::size_t i = 0; i < factors.size(); ++i) {
                                              v *= factors[i].evaluator(std::vector<double>{x[i]});
                                            }
                                            return v;
                                          });
                   return f;
                 }});
    t.push_back({"bernstein", "Bernstein polynomial B_s f on [0, 1]^d",
                 {{"target", "abs_half", "registry name on [0, 1]^d"}, {"s", "8", "degree"}}, [](const Params& p) {
                   TargetFunction target = target_by_name(p.str("target", "abs_half"));
                   const int s = p.integer("s", 8);
                   auto r = build_bernstein(target, s);
                   auto f = detail::instance(r.net, "bernstein(" + target.name + ",s=" + std::to_string(s) + ")");
                   f.claim = r.claim;
                   f.bound = r.stated_bound;
                   f.bound_kind = BoundKind::Asserted;
                   f.target = target;
                   f.notes.push_back("(5/4) w(1/sqrt(s)) form: " + detail::fmt_g(r.classical_bound));
                   return f;
                 }});
    t.push_back({"piecewise", "f1 + f2 chi{h <= p} on [0, 1]^d",
                 {{"f1", "0", "constant, x<i> or target name"},
                  {"f2", "1", "constant, x<i> or target name"},
                  {"h", "x0", "constant, x<i> or target name"},
                  {"p", "0.5", "constant, x<i> or target name"},
                  {"dim", "1", "d"},
                  {"n", "100", "sharpness"},
                  {"N", "8", "expansion order for named parts"},
                  {"mode", "direct", "direct|surrogate"}},
                 [](const Params& pr) {
                   const std::size_t d = static_cast<std::size_t>(pr.integer("dim", 1));
                   if (d < 1) throw ParameterError("dim must be >= 1");
                   const int N = pr.integer("N", 8);
                   const long n = pr.integer("n", 100);
                   std::map<std::string, TargetFunction> ts;
                   PiecewiseParts parts;
                   for (const char* k : {"f1", "f2", "h", "p"}) {
                     const std::string spec = pr.str(k, k == std::string("f1")   ? "0"
                                                        : k == std::string("f2") ? "1"
                                                        : k == std::string("h")  ? "x0"
                                                                                 : "0.5");
                     TargetFunction t = detail::part_target(spec, d);
                     Network net = detail::part_network(spec, t, N);
                     ts.emplace(k, t);
                     if (k == std::string("f1")) parts.f1 = net;
                     if (k == std::string("f2")) parts.f2 = net;
                     if (k == std::string("h")) parts.h = net;
                     if (k == std::string("p")) parts.p = net;
                   }
                   PiecewiseOptions opts;
                   const std::string mode = pr.str("mode", "direct");
                   if (mode == "surrogate") opts.mode = IndicatorMode::SurrogateClamped;
                   else if (mode != "direct") throw ParameterError("mode must be direct or surrogate");
                   auto r = build_piecewise(parts, n, Box::cube(d, 0.0, 1.0), opts);
                   auto f = detail::instance(r.net, "piecewise(n=" + std::to_string(n) + "," + mode + ")");
                   auto f1 = ts.at("f1"), f2 = ts.at("f2"), h = ts.at("h"), p = ts.at("p");
                   f.target = make_target("piecewise", Box::cube(d, 0.0, 1.0), [f1, f2, h, p](std::span<const double> x) {
                     return f1.evaluator(x) + (h.evaluator(x) <= p.evaluator(x) ? f2.evaluator(x) : 0.0);
                   });
                   f.notes.push_back("discontinuous target: use an L_p norm");
                   return f;
                 }});
    t.push_back({"monomial", "x^beta on [0, 1]^d", {{"beta", "3,2", "exponents"}}, [](const Params& p) {
                   std::vector<int> beta;
                   for (double v : p.reals("beta", "3,2")) {
                     if (v != std::floor(v)) throw ParameterError("beta entries must be integers");
                     beta.push_back(static_cast<int>(v));
                   }
                   auto f = detail::instance(compile_monomial(beta), "monomial(" + p.str("beta", "3,2") + ")");
                   f.claim = monomial_budget(beta);
                   f.target = make_target("monomial", Box::cube(beta.size(), 0.0, 1.0),
                                          [beta](std::span<const double> x) {
                                            double v = 1.0;
                                            for (std::size_t i = 0; i < beta.size(); ++i) v *= std::pow(x[i], beta[i]);
                                            return v;
                                          });
                   detail::exact(f);
                   return f;
                 }});
    t.push_back({"monomial_product", "x_1 ... x_d on [-1, 1]^d", {{"d", "4", "factors"}}, [](const Params& p) {
                   const int d = p.integer("d", 4);
                   auto f = detail::instance(compile_monomial_product(d), "monomial_product(d=" + std::to_string(d) + ")");
                   f.claim = monomial_product_budget(d);
                   f.target = make_target("monomial_product", Box::cube(d, -1.0, 1.0), [](std::span<const double> x) {
                     double v = 1.0;
                     for (double t : x) v *= t;
                     return v;
                   });
                   detail::exact(f);
                   return f;
                 }});
    t.push_back({"yarotsky_square", "ReLU x^2 on [0, 1]", {{"m", "3", "levels"}}, [](const Params& p) {
                   const int m = p.integer("m", 3);
                   auto f = detail::instance(yarotsky_square(m), "yarotsky_square(m=" + std::to_string(m) + ")");
                   f.claim = Budget{m, 4, 10L * m};
                   f.bound = yarotsky_square_bound(m);
                   f.bound_kind = BoundKind::Asserted;
                   f.target = target_by_name("square");
                   return f;
                 }});
    t.push_back({"yarotsky_product", "ReLU xy on [-M, M]^2", {{"m", "6", "levels"}, {"M", "1", "domain bound"}},
                 [](const Params& p) {
                   const int m = p.integer("m", 6);
                   const double M = p.real("M", 1.0);
                   auto f = detail::instance(yarotsky_product(m, M), "yarotsky_product(m=" + std::to_string(m) +
                                                                         ",M=" + detail::fmt_g(M) + ")");
                   f.claim = Budget{m + 1L, 12, 30L * m + 17};
                   f.bound = yarotsky_product_bound(m, M);
                   f.bound_kind = BoundKind::Asserted;
                   f.target = make_target("product", Box::cube(2, -M, M),
                                          [](std::span<const double> x) { return x[0] * x[1]; });
                   return f;
                 }});
    t.push_back({"relu_poly", "Legendre polynomial on [0, 1] through ReLU products",
                 {{"coeffs", "0.3333333333333333,0,0.6666666666666666", "Legendre coefficients"}, {"m", "6", "levels"}},
                 [](const Params& p) {
                   BasisPolynomial poly{Basis::Legendre, p.reals("coeffs", "0.3333333333333333,0,0.6666666666666666")};
                   const int m = p.integer("m", 6);
                   auto r = relu_poly_approx(poly, m);
                   auto f = detail::instance(r.net, "relu_poly(m=" + std::to_string(m) + ")");
                   f.claim = r.claim;
                   f.bound = r.theoretical_bound;
                   f.bound_kind = BoundKind::Reported;
                   f.target = make_target_1d("poly", 0.0, 1.0, [poly](double x) { return poly(x); });
                   if (!r.bound_meaningful) f.notes.push_back(r.warning);
                   return f;
                 }});
    return t;
  }();
  return table;
}

inline const Family& family_by_name(const std::string& name) {
  for (const auto& f : families())
    if (f.name == name) return f;
  throw ParameterError("unknown family '" + name + "'");
}

/// Legendre coefficients of the degree-n interpolant of a 1-D target at
/// Chebyshev points of its box; the polynomial is evaluated at x directly.
inline BasisPolynomial legendre_interpolant(const TargetFunction& f, int n) {
  if (f.dim != 1) throw ShapeError("legendre interpolation needs a 1-D target");
  if (n < 0) throw ParameterError("degree must be >= 0");
  const double lo = f.box.lo[0], hi = f.box.hi[0];
  Eigen::MatrixXd A(n + 1, n + 1);
  Eigen::VectorXd rhs(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * 0.5 * (1.0 - std::cos(std::numbers::pi * (i + 0.5) / (n + 1)));
    auto v = basis_values(Basis::Legendre, n, x);
    for (int k = 0; k <= n; ++k) A(i, k) = v[k];
    rhs(i) = f.evaluator(std::vector<double>{x});
  }
  Eigen::VectorXd c = A.colPivHouseholderQr().solve(rhs);
  BasisPolynomial p{Basis::Legendre, std::vector<double>(n + 1)};
  for (int k = 0; k <= n; ++k) p.coefficients[k] = c(k);
  return p;
}

struct CompareRow {
  std::string family;   // "dlu" or "relu"
  int m = 0;            // ReLU levels (0 for DLU)
  double error_vs_poly = 0.0;
  double error_vs_target = 0.0;
  std::optional<double> bound;
  StructuralAudit audit;
};

/// Same Legendre interpolant compiled both ways, measured on one uniform grid
/// of [0, 1] (the target must live there).
inline std::vector<CompareRow> compare_dlu_relu(const TargetFunction& target, int degree, const std::vector<int>& ms,
                                                long points = 10001) {
  if (target.dim != 1 || target.box.lo[0] != 0.0 || target.box.hi[0] != 1.0) {
    throw ParameterError("dlu-vs-relu comparison needs a 1-D target on [0, 1]");
  }
  if (points < 2) throw ParameterError("grid needs at least 2 points");
  BasisPolynomial poly = legendre_interpolant(target, degree);
  auto row = [&](const Network& net, std::string fam, int m, std::optional<double> bound) {
    CompareRow r;
    r.family = std::move(fam);
    r.m = m;
    r.bound = bound;
    r.audit = structure_of(net);
    for (long i = 0; i < points; ++i) {
      const double x = static_cast<double>(i) / (points - 1);
      const double v = net({x});
      r.error_vs_poly = std::max(r.error_vs_poly, std::abs(v - poly(x)));
      r.error_vs_target = std::max(r.error_vs_target, std::abs(v - target.evaluator(std::vector<double>{x})));
    }
    return r;
  };
  std::vector<CompareRow> rows;
  rows.push_back(row(compile_polynomial(poly), "dlu", 0, 0.0));
  for (int m : ms) {
    auto r = relu_poly_approx(poly, m);
    rows.push_back(row(r.net, "relu", m, r.theoretical_bound));
  }
  return rows;
}

inline std::string compare_to_csv(const std::vector<CompareRow>& rows) {
  std::string out = "family,m,error_vs_poly,error_vs_target,theoretical_bound,depth,width,weights\n";
  for (const auto& r : rows) {
    out += r.family + "," + std::to_string(r.m) + "," + detail::fmt_g(r.error_vs_poly) + "," +
           detail::fmt_g(r.error_vs_target) + "," + (r.bound ? detail::fmt_g(*r.bound) : std::string()) + "," +
           std::to_string(r.audit.depth) + "," + std::to_string(r.audit.width) + "," +
           std::to_string(r.audit.nonzero_weights) + "\n";
  }
  return out;
}

}  // namespace dluforge
