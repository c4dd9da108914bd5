// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "dluforge/dluforge.hpp"
#include "oracles.hpp"

using namespace dluforge;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& why) {
    if (!cond && ok) {
      ok = false;
      detail = why;
    }
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

int failures = 0;

void criterion(int k, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0.0) o.require(secs < budget_s, "runtime " + num(secs) + " s over " + num(budget_s) + " s");
  if (!o.ok) ++failures;
  std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << k << ": " << name << " (" << num(secs) << " s)";
  if (!o.detail.empty()) std::cout << " -- " << o.detail;
  std::cout << std::endl;
}

Network random_relu(std::mt19937_64& rng, const std::vector<std::size_t>& widths) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Layer> hidden;
  std::size_t prev = 1;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    Matrix W(widths[l], prev);
    std::vector<double> b(widths[l]);
    for (std::size_t r = 0; r < widths[l]; ++r) {
      double row = 0.0;
      for (std::size_t c = 0; c < prev; ++c) row += W(r, c) = g(rng);
      b[r] = l == 0 ? -W(r, 0) * u(rng) : -row * u(rng) + 0.1 * g(rng);
    }
    hidden.push_back({W, b, Activation::relu()});
    prev = widths[l];
  }
  Matrix O(1, prev);
  for (std::size_t c = 0; c < prev; ++c) O(0, c) = g(rng);
  return Network(1, hidden, Layer{O, {g(rng)}, Activation::identity()});
}

std::vector<Network> random_relu_nets() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> depth(1, 3), width(1, 8);
  std::vector<Network> nets;
  for (int t = 0; t < 100; ++t) {
    std::vector<std::size_t> widths(depth(rng));
    for (auto& w : widths) w = width(rng);
    nets.push_back(random_relu(rng, widths));
  }
  return nets;
}

double sup_1d(const Network& net, const std::function<double(double)>& f, double lo, double hi, int points) {
  double e = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    e = std::max(e, std::abs(net({x}) - f(x)));
  }
  return e;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("DLU_FORGE_SEED=1234 \"") + DLUFORGE_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  criterion(1, "exact product and division gates", 1.0, [] {
    Outcome o;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> sym(-2.0, 2.0), den(0.5, 2.0);
    Network p = product_gate(2.0), d = division_gate(0.5, 2.0);
    double ep = 0.0, ed = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double x = sym(rng), y = sym(rng), z = den(rng);
      ep = std::max(ep, std::abs(p({x, y}) - x * y));
      ed = std::max(ed, std::abs(d({z, y}) - y / z));
    }
    o.require(ep <= 4e-12, "product error " + num(ep));
    o.require(ed <= 4e-12, "division error " + num(ed));
    o.require(audit(p, {2, 9, 45}).within_budget, "product audit");
    o.require(audit(d, {3, 9, 51}).within_budget, "division audit");
    o.detail = o.ok ? "product " + num(ep) + ", division " + num(ed) : o.detail;
    return o;
  });

  criterion(2, "polynomial compiler on random Legendre series", 5.0, [] {
    Outcome o;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> deg(1, 12);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const int n = t < 12 ? t + 1 : deg(rng);
      std::vector<double> c(n + 1);
      double l1 = 0.0;
      for (auto& v : c) l1 += std::abs(v = u(rng));
      Network net = compile_polynomial({Basis::Legendre, c});
      o.require(audit(net, polynomial_budget(n)).within_budget, "audit miss at degree " + std::to_string(n));
      for (int i = 0; i < 201; ++i) {
        const double x = std::cos(std::numbers::pi * (i + 0.5) / 201);
        const double e = std::abs(net({x}) - oracle::legendre_series(c, x)) / l1;
        worst = std::max(worst, e);
      }
    }
    o.require(worst <= 1e-10, "relative error " + num(worst));
    if (o.ok) o.detail = "worst relative error " + num(worst);
    return o;
  });

  criterion(3, "ReLU surrogate distance", 1.0, [] {
    Outcome o;
    for (long n : {1L, 10L, 100L}) {
      Network s = relu_surrogate(n, 1);
      double e = 0.0;
      for (int i = 0; i <= 200000; ++i) {
        // geometric spread towards -1e6 plus a uniform patch on [0, 10]
        const double x = i <= 100000 ? 1.0 - std::pow(10.0, 6.0 * i / 100000.0) : 10.0 * (i - 100000) / 100000.0;
        e = std::max(e, std::abs(s({x}) - oracle::relu(x)));
      }
      const double b = 1.0 / static_cast<double>(n);
      o.require(e <= b, "n=" + std::to_string(n) + " error " + num(e) + " above 1/n");
      o.require(e >= 0.9 * b, "n=" + std::to_string(n) + " error " + num(e) + " below 0.9/n");
    }
    return o;
  });

  criterion(4, "e^{-|x|} sweep and psi gadget", 5.0, [] {
    Outcome o;
    auto f = [](double x) { return std::exp(-std::abs(x)); };
    std::vector<double> errs;
    for (int n = 2; n <= 8; ++n) {
      auto e = build_exp_abs(n, 1);
      errs.push_back(sup_1d(e.net, f, -30.0, 30.0, 20001));
      Network psi = psi_gadget(e.lambda);
      double pe = 0.0;
      for (int i = 0; i < 20001; ++i) {
        const double x = -30.0 + 60.0 * i / 20000;
        pe = std::max(pe, std::abs(psi({x}) - std::abs(x)));
      }
      o.require(pe <= 1.0 / e.lambda, "psi error above 1/lambda at n=" + std::to_string(n));
    }
    double worst = 0.0;
    for (std::size_t i = 1; i < errs.size(); ++i) {
      o.require(errs[i] < errs[i - 1], "not decreasing at n=" + std::to_string(i + 2));
      worst = std::max(worst, errs[i] / errs[i - 1]);
    }
    o.require(worst <= 0.6, "ratio " + num(worst));
    if (o.ok) o.detail = "worst ratio " + num(worst) + ", error at n=8 " + num(errs.back()) + " (3^-7 = " + num(std::pow(3.0, -7)) + ", reported only)";
    return o;
  });

  criterion(5, "Yarotsky baseline", 2.0, [] {
    Outcome o;
    for (int m = 2; m <= 8; ++m) {
      Network f = yarotsky_square(m);
      const double e = sup_1d(f, [](double x) { return x * x; }, 0.0, 1.0, (1 << 14) + 1);
      o.require(std::abs(e - std::ldexp(1.0, -(2 * m + 2))) <= 1e-13, "m=" + std::to_string(m) + " error " + num(e));
    }
    Network g = yarotsky_product(6, 1.0);
    double e = 0.0;
    for (int i = 0; i <= 400; ++i)
      for (int j = 0; j <= 400; ++j) {
        const double x = -1.0 + i / 200.0, y = -1.0 + j / 200.0;
        e = std::max(e, std::abs(g({x, y}) - x * y));
      }
    o.require(e <= 3.0 / 8192.0, "product error " + num(e));
    if (o.ok) o.detail = "product error " + num(e);
    return o;
  });

  const auto nets = random_relu_nets();

  criterion(6, "breakpoint counting on 100 random ReLU nets", 10.0, [&] {
    Outcome o;
    double worst = 0.0;
    for (std::size_t t = 0; t < nets.size(); ++t) {
      const Network& n = nets[t];
      auto pl = extract_breakpoints(n);
      double bound = std::pow(3.0, static_cast<double>(n.depth()));
      for (const auto& layer : n.hidden_layers()) bound *= static_cast<double>(layer.width());
      o.require(static_cast<double>(pl.breakpoint_count()) <= bound, "count over bound for net " + std::to_string(t));
      for (int i = 0; i < 1000; ++i) {
        const double x = i / 999.0;
        const double v = n({x});
        worst = std::max(worst, std::abs(pl(x) - v) / std::max(1.0, std::abs(v)));
      }
    }
    o.require(worst <= 1e-12, "symbolic vs numeric " + num(worst));
    if (o.ok) o.detail = "max disagreement " + num(worst);
    return o;
  });

  criterion(7, "lower bound for x^2 on the same nets", 0.0, [&] {
    Outcome o;
    for (std::size_t t = 0; t < nets.size(); ++t) {
      auto pl = extract_breakpoints(nets[t]);
      const double m = static_cast<double>(pl.breakpoint_count());
      const double err = pl.sup_distance([](double x) { return x * x; }, [](double s) { return s / 2.0; });
      o.require(err >= 0.25 / ((m + 1.0) * (m + 1.0)) - 1e-12, "net " + std::to_string(t) + " beats the bound");
    }
    return o;
  });

  criterion(8, "Bernstein network for |x - 1/2|", 10.0, [] {
    Outcome o;
    auto t = target_by_name("abs_half");
    std::string d;
    for (int s : {8, 16, 32}) {
      auto b = build_bernstein(t, s);
      const double w = partial_modulus(t, 0, 1.0 / s, 10000);
      const double e = sup_1d(b.net, [](double x) { return std::abs(x - 0.5); }, 0.0, 1.0, 10001);
      d += " s=" + std::to_string(s) + ": " + num(e) + " vs " + num(1.25 * w) + ";";
      o.require(e <= 1.25 * w, "s=" + std::to_string(s) + " error " + num(e) + " above 5/4 w(1/s) = " + num(1.25 * w));
      auto lin = build_bernstein(target_by_name("ramp"), s);
      o.require(sup_1d(lin.net, [](double x) { return x; }, 0.0, 1.0, 10001) <= 1e-11, "linear not reproduced");
    }
    o.detail = (o.ok ? "" : o.detail + " |") + d;
    return o;
  });

  criterion(9, "expansion pipeline", 10.0, [] {
    Outcome o;
    double prev = 1e300, at8 = 0.0;
    for (int N = 2; N <= 10; ++N) {
      Network net = compile_expansion(expand(target_by_name("exp"), {Truncation::MaxNorm, N}));
      const double e = sup_1d(net, [](double x) { return std::exp(x); }, -1.0, 1.0, 2001);
      o.require(e < prev, "not decreasing at N=" + std::to_string(N));
      if (N == 8) at8 = e;
      prev = e;
    }
    o.require(at8 <= 1e-6, "error at N=8 " + num(at8));
    auto xy = expand(target_by_name("product"), {Truncation::Hyperbolic, 2});
    int nonzero = 0;
    for (const auto& [n, c] : xy.coefficients) nonzero += std::abs(c) > 1e-12;
    o.require(nonzero == 1, "xy has " + std::to_string(nonzero) + " nonzero coefficients");
    Network g = compile_expansion(xy);
    double e2 = 0.0;
    for (int i = 0; i <= 100; ++i)
      for (int j = 0; j <= 100; ++j) {
        const double x = -1.0 + i / 50.0, y = -1.0 + j / 50.0;
        e2 = std::max(e2, std::abs(g({x, y}) - x * y));
      }
    o.require(e2 <= 1e-12, "xy error " + num(e2));
    if (o.ok) o.detail = "error at N=8 " + num(at8) + ", xy error " + num(e2);
    return o;
  });

  criterion(10, "piecewise step composition", 2.0, [] {
    Outcome o;
    double prev = 1e300;
    for (long n : {10L, 100L, 1000L}) {
      PiecewiseParts parts{constant_network(1, 0.0), constant_network(1, 1.0), coordinate_network(1, 0),
                           constant_network(1, 0.5)};
      auto r = build_piecewise(parts, n, Box::cube(1, 0.0, 1.0));
      double tail = 0.0;
      for (int i = 0; i <= 10000; ++i) {
        const double x = i / 10000.0;
        const double v = r.net({x});
        if (x <= 0.5 - 1.0 / n && v != 1.0) o.require(false, "not exactly 1 at x=" + num(x) + ", n=" + std::to_string(n));
        if (x >= 0.6) tail = std::max(tail, std::abs(v));
      }
      o.require(tail <= 2.0 / (0.1 * n), "tail " + num(tail) + " at n=" + std::to_string(n));
      o.require(tail < prev, "tail not decreasing at n=" + std::to_string(n));
      prev = tail;
    }
    if (o.ok) o.detail = "tail at n=1000 " + num(prev);
    return o;
  });

  criterion(11, "byte-identical CLI reports", 0.0, [] {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "dluforge_acceptance";
    fs::create_directories(dir);
    const std::vector<std::string> jobs{
        "sweep exp --param n=2..8 --norm sup --json {}",
        "sweep exp --param n=2..5 --set dim=3 --norm l2 --json {}",
        "sweep yarotsky_square --param m=2..8 --json {}",
        "build bernstein s=8 --check --report {}",
        "compare dlu-vs-relu --target square --degree 2 --m 4,6 -o {}",
    };
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      std::string a = jobs[j], b = jobs[j];
      const std::string pa = (dir / ("a" + std::to_string(j))).string(), pb = (dir / ("b" + std::to_string(j))).string();
      a.replace(a.find("{}"), 2, pa);
      b.replace(b.find("{}"), 2, pb);
      const int ca = run_cli(a), cb = run_cli(b);
      o.require(ca == 0 && cb == 0, "exit codes " + std::to_string(ca) + "/" + std::to_string(cb) + " for: " + jobs[j]);
      if (ca == 0 && cb == 0) o.require(read_text_file(pa) == read_text_file(pb), "outputs differ for: " + jobs[j]);
    }
    fs::remove_all(dir);
    return o;
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion/criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
