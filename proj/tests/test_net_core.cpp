#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "dluforge/dluforge.hpp"
#include "oracles.hpp"

using namespace dluforge;

namespace {

Network single(Activation act, double w = 1.0, double b = 0.0) {
  Matrix W(1, 1), V(1, 1);
  W(0, 0) = w;
  V(0, 0) = 1.0;
  return Network(1, {Layer{W, {b}, act}}, Layer{V, {0.0}, Activation::identity()});
}

Network random_net(std::mt19937_64& rng, std::size_t in, std::vector<std::size_t> widths, Activation act) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Layer> hidden;
  std::size_t prev = in;
  for (auto w : widths) {
    Matrix W(w, prev);
    std::vector<double> b(w);
    for (std::size_t r = 0; r < w; ++r) {
      for (std::size_t c = 0; c < prev; ++c) W(r, c) = g(rng);
      b[r] = g(rng);
    }
    hidden.push_back({W, b, act});
    prev = w;
  }
  Matrix O(1, prev);
  for (std::size_t c = 0; c < prev; ++c) O(0, c) = g(rng);
  return Network(in, hidden, Layer{O, {g(rng)}, Activation::identity()});
}

}  // namespace

TEST(Activation, DluValues) {
  EXPECT_EQ(activate(Activation::dlu(), 2.0), 2.0);
  EXPECT_EQ(activate(Activation::dlu(), -1.0), -0.5);
  EXPECT_EQ(activate(Activation::dlu(), 0.0), 0.0);
  EXPECT_EQ(activate(Activation::relu(), -3.0), 0.0);
  EXPECT_EQ(activate(Activation::identity(), -3.0), -3.0);
}

TEST(Activation, DluRangeAndMonotone) {
  double prev = -std::numeric_limits<double>::infinity();
  for (double x = -1e6; x < 1e3; x = x < -1 ? x / 1.3 : x + 0.37) {
    const double y = activate(Activation::dlu(), x);
    EXPECT_GT(y, -1.0);
    EXPECT_GE(y, prev);
    EXPECT_EQ(y, oracle::dlu(x));
    prev = y;
  }
}

TEST(Activation, NonFiniteInputThrows) {
  EXPECT_THROW(activate(Activation::dlu(), std::nan("")), DomainError);
  EXPECT_THROW(activate(Activation::relu(), std::numeric_limits<double>::infinity()), DomainError);
}

TEST(Activation, TagNamesRoundTrip) {
  for (auto t : {ActivationTag::DLU, ActivationTag::ReLU, ActivationTag::Identity, ActivationTag::LeakyReLU,
                 ActivationTag::ELU}) {
    EXPECT_EQ(activation_tag_from_string(to_string(t)), t);
  }
}

TEST(Network, ForwardExamples) {
  EXPECT_EQ(single(Activation::dlu())({-1.0}), -0.5);
  Matrix W(1, 1);
  W(0, 0) = 2.0;
  Network affine(1, {}, Layer{W, {3.0}, Activation::identity()});
  EXPECT_EQ(affine({5.0}), 13.0);
  EXPECT_EQ(affine.depth(), 0);
  EXPECT_EQ(affine.width(), 0);
  EXPECT_NEAR(product_gate(1.0)({0.5, 0.25}), 0.125, 1e-12);
}

TEST(Network, ShapeChecks) {
  Matrix W(2, 3);
  EXPECT_THROW(Network(2, {Layer{W, {0, 0}, Activation::dlu()}}, Layer{Matrix(1, 2), {0}, Activation::identity()}),
               ShapeError);
  EXPECT_THROW(Network(1, {}, Layer{Matrix(1, 1), {0}, Activation::dlu()}), ShapeError);
  EXPECT_THROW(Network(1, {}, Layer{Matrix(1, 1), {0, 0}, Activation::identity()}), ShapeError);
  EXPECT_THROW(Matrix(2, 2, {1.0, 2.0, 3.0}), ShapeError);
  EXPECT_THROW(square_gate()({0.1, 0.2}), ShapeError);
}

TEST(Network, CountsNonzeroWeightsOnly) {
  Network n = single(Activation::dlu(), 1.0, 0.0);
  EXPECT_EQ(n.nonzero_weights(), 2);  // zero biases skipped
  Network m = single(Activation::dlu(), 1.0, 0.5);
  EXPECT_EQ(m.nonzero_weights(), 3);
  EXPECT_EQ(m.depth(), 1);
  EXPECT_EQ(m.width(), 1);
}

TEST(Network, AuditAgainstClaims) {
  auto a = audit(product_gate(1.0), {2, 9, 45});
  EXPECT_TRUE(a.within_budget);
  for (int n = 1; n <= 8; ++n) {
    BasisPolynomial p{Basis::Legendre, std::vector<double>(n + 1, 1.0)};
    EXPECT_TRUE(audit(compile_polynomial(p), polynomial_budget(n)).within_budget) << n;
  }
  EXPECT_FALSE(audit(product_gate(1.0), {1, 9, 45}).within_budget);
  EXPECT_FALSE(audit(product_gate(1.0), {2, 8, 45}).within_budget);
  EXPECT_FALSE(audit(product_gate(1.0), {2, 9, 41}).within_budget);
}

TEST(Network, EvaluationIsBitwiseDeterministic) {
  std::mt19937_64 rng(3);
  Network n = random_net(rng, 3, {6, 5, 4}, Activation::dlu());
  const std::vector<double> x{0.3, -0.7, 1.9};
  const double a = n(x), b = n(x);
  EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
}

TEST(Serialize, RoundTripIsCanonicalAndBitwise) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    Network n = random_net(rng, 1 + t % 3, {3, 1 + static_cast<std::size_t>(t % 4)},
                           t % 2 ? Activation::relu() : Activation::dlu());
    const std::string s = serialize(n);
    Network back = deserialize(s);
    EXPECT_EQ(back, n);
    EXPECT_EQ(serialize(back), s);
    std::vector<double> x(n.input_dim());
    for (auto& v : x) v = std::uniform_real_distribution<double>(-3, 3)(rng);
    EXPECT_EQ(back(x), n(x));
  }
}

TEST(Serialize, ParameterisedActivationsSurvive) {
  Network n = single(Activation::leaky_relu(0.125), 2.0, -1.0);
  Network back = deserialize(serialize(n));
  EXPECT_EQ(back.hidden_layers()[0].activation, Activation::leaky_relu(0.125));
  EXPECT_EQ(back({0.1}), n({0.1}));
}

TEST(Serialize, MalformedDocuments) {
  const std::string s = serialize(square_gate());
  EXPECT_THROW(deserialize(s.substr(0, s.size() / 2)), ParseError);
  EXPECT_THROW(deserialize("{}"), ParseError);
  EXPECT_THROW(deserialize(R"({"format":"other","version":1,"input_dim":1,"layers":[]})"), ParseError);
  std::string wrong_shape = s;
  const auto pos = wrong_shape.find("\"input_dim\":1");
  ASSERT_NE(pos, std::string::npos);
  wrong_shape.replace(pos, 13, "\"input_dim\":2");
  EXPECT_THROW(deserialize(wrong_shape), ParseError);
}

TEST(Circuit, CarryIsExactAboveLowerBound) {
  for (auto act : {Activation::dlu(), Activation::relu()}) {
    CircuitBuilder b(1, act);
    Signal x = b.input(0);
    Signal c = b.carry(x, 4, -2.0);
    Network n = b.finish(c);
    EXPECT_EQ(n.depth(), 4);
    for (double v : {-2.0, -1.3, 0.0, 0.7, 5.25}) EXPECT_NEAR(n({v}), v, 1e-15 * (1 + std::abs(v)));
  }
}
