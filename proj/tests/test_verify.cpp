#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "dluforge/dluforge.hpp"

using namespace dluforge;

namespace {

TargetFunction zero_1d(double lo, double hi) {
  return make_target_1d("zero", lo, hi, [](double) { return 0.0; });
}

}  // namespace

TEST(Measure, ExactNetworkHasZeroError) {
  auto r = measure_error(constant_network(1, 0.0), zero_1d(0, 1), NormSpec::sup(), default_grid(1));
  EXPECT_EQ(r.measured_error, 0.0);
  auto l2 = measure_error(coordinate_network(1, 0), target_by_name("identity"), NormSpec::l2(), default_grid(1));
  EXPECT_EQ(l2.measured_error, 0.0);
}

TEST(Measure, ProductGateAndYarotsky) {
  auto r = measure_error(product_gate(1.0), target_by_name("product"), NormSpec::sup(), default_grid(2), "product",
                         Budget{2, 9, 45});
  EXPECT_LE(r.measured_error, 1e-12);
  EXPECT_TRUE(r.budget_claimed);
  EXPECT_TRUE(r.audit.within_budget);
  EXPECT_EQ(r.grid.kind, GridKind::Uniform);

  auto y = measure_error(yarotsky_square(3), target_by_name("square"), NormSpec::sup(),
                         GridSpec{GridKind::Uniform, (1 << 14) + 1, std::nullopt});
  EXPECT_NEAR(y.measured_error, std::ldexp(1.0, -8), 1e-12);
}

TEST(Measure, NormsOfAKnownError) {
  // error e(x) = x on [0, 1]: L1 = 1/2, L2 = 1/sqrt(3), L3 = 4^{-1/3}, sup = 1
  auto t = zero_1d(0, 1);
  Network x = coordinate_network(1, 0);
  GridSpec g{GridKind::Uniform, 20001, std::nullopt};
  EXPECT_NEAR(measure_error(x, t, NormSpec::sup(), g).measured_error, 1.0, 1e-15);
  EXPECT_NEAR(measure_error(x, t, NormSpec::l1(), g).measured_error, 0.5, 1e-12);
  EXPECT_NEAR(measure_error(x, t, NormSpec::l2(), g).measured_error, 1.0 / std::sqrt(3.0), 1e-8);
  EXPECT_NEAR(measure_error(x, t, NormSpec::lp(3), g).measured_error, std::pow(0.25, 1.0 / 3), 1e-8);
}

TEST(Measure, BoxVolumeScalesLp) {
  // e = 1 on [-30, 30]: L1 = 60
  auto t = zero_1d(-30, 30);
  auto r = measure_error(constant_network(1, 1.0), t, NormSpec::l1(), default_grid(1));
  EXPECT_NEAR(r.measured_error, 60.0, 1e-9);
}

TEST(Measure, MonteCarloIsSeededAndReportsStandardError) {
  auto t = make_target("zero3", Box::cube(3, 0.0, 1.0), [](std::span<const double>) { return 0.0; });
  Network x = coordinate_network(3, 0);
  auto g = default_grid(3);
  EXPECT_EQ(g.kind, GridKind::MonteCarlo);
  EXPECT_EQ(g.points, 100000);
  EXPECT_EQ(*g.seed, kDefaultSeed);
  auto a = measure_error(x, t, NormSpec::l1(), g);
  auto b = measure_error(x, t, NormSpec::l1(), g);
  EXPECT_EQ(a, b);
  ASSERT_TRUE(a.standard_error);
  EXPECT_NEAR(a.measured_error, 0.5, 5.0 * *a.standard_error);
  auto other = g;
  other.seed = 1;
  EXPECT_NE(measure_error(x, t, NormSpec::l1(), other).measured_error, a.measured_error);
  other.seed.reset();
  EXPECT_THROW(measure_error(x, t, NormSpec::l1(), other), ParameterError);
}

TEST(Measure, WeightedChebyshevQuadrature) {
  // int_{-1}^{1} 2 (1 - y^2)^{-1/2} dy = 2 pi; with error 1, weighted L1 = 2 pi
  auto t = make_target_1d("zero", -1, 1, [](double) { return 0.0; });
  NormSpec w = NormSpec::l1();
  w.weighted = true;
  auto r = measure_error(constant_network(1, 1.0), t, w, GridSpec{GridKind::Chebyshev, 64, std::nullopt});
  EXPECT_NEAR(r.measured_error, 2.0 * std::numbers::pi, 1e-12);
  // weighted L2 of e = y: 2 * pi / 2 = pi, so sqrt(pi)
  auto s = measure_error(coordinate_network(1, 0), t, NormSpec{NormKind::L2, 2.0, true},
                         GridSpec{GridKind::Chebyshev, 64, std::nullopt});
  EXPECT_NEAR(s.measured_error, std::sqrt(std::numbers::pi), 1e-12);
  // unweighted on Chebyshev nodes: L1 of 1 over [-1, 1] = 2
  auto u = measure_error(constant_network(1, 1.0), t, NormSpec::l1(), GridSpec{GridKind::Chebyshev, 4000, std::nullopt});
  EXPECT_NEAR(u.measured_error, 2.0, 1e-6);
  EXPECT_THROW(measure_error(constant_network(1, 1.0), t, w, default_grid(1)), ParameterError);
}

TEST(Measure, Errors) {
  EXPECT_THROW(measure_error(product_gate(1), target_by_name("square"), NormSpec::sup(), default_grid(1)), ShapeError);
  EXPECT_THROW(measure_error(square_gate(), target_by_name("square_sym"), NormSpec::lp(0.5), default_grid(1)),
               ParameterError);
  EXPECT_THROW(measure_error(square_gate(), target_by_name("square_sym"), NormSpec::sup(),
                             GridSpec{GridKind::Uniform, 1, std::nullopt}),
               ParameterError);
  EXPECT_THROW(norm_from_string("l0.5"), ParameterError);
  EXPECT_THROW(norm_from_string("max"), ParameterError);
}

TEST(Measure, NormNames) {
  for (const char* s : {"sup", "l1", "l2", "l3", "weighted-l2"}) EXPECT_EQ(to_string(norm_from_string(s)), s);
  EXPECT_EQ(norm_from_string("lp:4").p, 4.0);
  EXPECT_EQ(grid_kind_from_string("mc"), GridKind::MonteCarlo);
}

TEST(Sweep, YarotskyRatio) {
  auto s = sweep(
      "m", {2, 3, 4, 5, 6, 7, 8},
      [](double m) {
        const int k = static_cast<int>(m);
        return BuiltNetwork{yarotsky_square(k), "y", std::nullopt, yarotsky_square_bound(k)};
      },
      target_by_name("square"), NormSpec::sup(), GridSpec{GridKind::Uniform, (1 << 14) + 1, std::nullopt},
      RateFit::GeometricRatio);
  ASSERT_TRUE(s.rate);
  EXPECT_NEAR(*s.rate, 0.25, 0.01);
  EXPECT_FALSE(s.partial);
  EXPECT_EQ(s.reports.size(), 7u);
}

TEST(Sweep, ExpAbsRatio) {
  auto s = sweep(
      "n", {2, 3, 4, 5, 6, 7, 8},
      [](double n) {
        auto e = build_exp_abs(static_cast<int>(n), 1);
        return BuiltNetwork{e.net, "exp", e.claim, e.theoretical_bound};
      },
      target_by_name("exp_abs"), NormSpec::sup(), default_grid(1), RateFit::GeometricRatio);
  ASSERT_TRUE(s.rate);
  EXPECT_LE(*s.rate, 0.6);
  for (const auto& r : s.reports) EXPECT_TRUE(r.audit.within_budget);
}

TEST(Sweep, ExpansionDecreases) {
  auto s = sweep(
      "N", {2, 3, 4, 5, 6, 7, 8, 9, 10},
      [](double N) {
        return BuiltNetwork{compile_expansion(expand(target_by_name("exp"), {Truncation::MaxNorm, int(N)})), "e",
                            std::nullopt, std::nullopt};
      },
      target_by_name("exp"), NormSpec::sup(), default_grid(1), RateFit::GeometricRatio);
  for (std::size_t i = 1; i < s.reports.size(); ++i) EXPECT_LT(s.reports[i].measured_error, s.reports[i - 1].measured_error);
}

TEST(Sweep, PartialOnBuilderFailure) {
  auto s = sweep(
      "n", {1, 2, 3, 4},
      [](double n) {
        if (n > 2) throw ConstructionError("boom");
        return BuiltNetwork{square_gate(), "sq", std::nullopt, std::nullopt};
      },
      target_by_name("square_sym"), NormSpec::sup(), default_grid(1), RateFit::GeometricRatio);
  EXPECT_TRUE(s.partial);
  EXPECT_EQ(s.reports.size(), 2u);
  EXPECT_NE(s.failure.find("boom"), std::string::npos);
  EXPECT_FALSE(s.rate);
}

TEST(Sweep, Preconditions) {
  auto b = [](double) { return BuiltNetwork{square_gate(), "", std::nullopt, std::nullopt}; };
  EXPECT_THROW(sweep("n", {1, 2}, b, target_by_name("square_sym"), NormSpec::sup(), default_grid(1),
                     RateFit::GeometricRatio),
               ParameterError);
  EXPECT_THROW(sweep("n", {1, 3, 2}, b, target_by_name("square_sym"), NormSpec::sup(), default_grid(1),
                     RateFit::GeometricRatio),
               ParameterError);
}

TEST(Sweep, RateFits) {
  EXPECT_NEAR(*fit_rate({1, 2, 3, 4}, {1, 0.5, 0.25, 0.125}, RateFit::GeometricRatio), 0.5, 1e-12);
  EXPECT_NEAR(*fit_rate({1, 2, 4, 8}, {1, 0.25, 1.0 / 16, 1.0 / 64}, RateFit::LogLogSlope), -2.0, 1e-12);
  EXPECT_FALSE(fit_rate({1, 2, 3}, {1, 0, 0}, RateFit::GeometricRatio));
}

TEST(Report, EmptySweepIsHeaderOnly) {
  SweepResult s;
  EXPECT_EQ(to_csv(s), "parameter,measured_error,theoretical_bound,depth,width,weights\n");
}

TEST(Report, JsonRoundTrip) {
  auto s = sweep(
      "m", {2, 3, 4},
      [](double m) {
        return BuiltNetwork{yarotsky_square(int(m)), "y", Budget{int(m), 4, 10L * int(m)},
                            yarotsky_square_bound(int(m))};
      },
      target_by_name("square"), NormSpec::sup(), default_grid(1), RateFit::GeometricRatio);
  const std::string text = dump_report(to_json(s));
  SweepResult back = sweep_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back, s);
  EXPECT_EQ(dump_report(to_json(back)), text);
  for (const auto& r : s.reports) EXPECT_EQ(error_report_from_json(to_json(r)), r);

  auto t = make_target("zero3", Box::cube(3, 0.0, 1.0), [](std::span<const double>) { return 0.0; });
  auto mc = measure_error(coordinate_network(3, 1), t, NormSpec::l2(), default_grid(3));
  EXPECT_EQ(error_report_from_json(to_json(mc)), mc);
}

TEST(Report, CsvRows) {
  SweepResult s;
  s.values = {2};
  ErrorReport r;
  r.measured_error = 0.1;
  r.audit.depth = 3;
  r.audit.width = 4;
  r.audit.nonzero_weights = 5;
  s.reports = {r};
  EXPECT_EQ(to_csv(s), std::string(kCsvHeader) + "2,0.10000000000000001,,3,4,5\n");
}

TEST(Report, MalformedJson) {
  EXPECT_THROW(sweep_from_json(nlohmann::json::parse("{}")), ParseError);
  EXPECT_THROW(error_report_from_json(nlohmann::json::parse(R"({"target_name": 3})")), ParseError);
}

TEST(Report, UnwritablePath) {
  EXPECT_THROW(write_text_file("/nonexistent-dir/x/y.csv", "a"), Error);
  const auto p = std::filesystem::temp_directory_path() / "dluforge_report_test.txt";
  write_text_file(p.string(), "abc\n");
  EXPECT_EQ(read_text_file(p.string()), "abc\n");
  std::filesystem::remove(p);
}

TEST(Families, EveryFamilyBuildsWithDefaults) {
  for (const auto& f : families()) {
    SCOPED_TRACE(f.name);
    FamilyInstance fi = f.build({});
    ASSERT_TRUE(fi.target);
    EXPECT_EQ(fi.net.input_dim(), fi.target->dim);
    NormSpec norm = f.name == "indicator" || f.name == "piecewise" ? NormSpec::l1() : NormSpec::sup();
    auto r = measure_error(fi.net, *fi.target, norm, default_grid(fi.target->dim), fi.id, fi.claim);
    EXPECT_FALSE(bound_violated(fi, r.measured_error)) << r.measured_error;
    if (fi.bound_kind == BoundKind::Asserted && fi.bound == 0.0) {
      EXPECT_LE(r.measured_error, kExactSlack);
    }
  }
}

TEST(Families, ParamsAreValidated) {
  EXPECT_THROW(family_by_name("nope"), ParameterError);
  EXPECT_THROW(family_by_name("yarotsky_square").build({{"m", "2.5"}}), ParameterError);
  EXPECT_THROW(family_by_name("product").build({{"M", "abc"}}), ParameterError);
  EXPECT_THROW(family_by_name("expansion").build({{"trunc", "diamond"}}), ParameterError);
}

TEST(Families, ExpansionHasNoConcreteBudget) {
  auto fi = family_by_name("expansion").build({{"target", "exp"}, {"N", "6"}});
  EXPECT_FALSE(fi.claim);
  EXPECT_FALSE(fi.notes.empty());
}

TEST(Families, LegendreInterpolantReproducesPolynomials) {
  auto p = legendre_interpolant(target_by_name("square"), 4);
  for (double x = 0.0; x <= 1.0; x += 0.1) EXPECT_NEAR(p(x), x * x, 1e-12);
}
