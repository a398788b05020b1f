#include <gtest/gtest.h>

#include <random>

#include "sobext/core/jet.hpp"
#include "sobext/core/quadrature.hpp"

using namespace sobext;

TEST(Jet, ProductOfSinAndExpMatchesClosedForm) {
  Point<2> p{0.3, -0.7};
  auto x = Jet<2>::variables(p, 4);
  Jet<2> f = sin(x[0]) * exp(x[1]);
  double s = std::sin(0.3), c = std::cos(0.3), e = std::exp(-0.7);
  EXPECT_NEAR(f.value(), s * e, 1e-14);
  EXPECT_NEAR(f.derivative({1, 0}), c * e, 1e-14);
  EXPECT_NEAR(f.derivative({2, 1}), -s * e, 1e-13);
  EXPECT_NEAR(f.derivative({3, 1}), -c * e, 1e-13);
  EXPECT_NEAR(f.derivative({0, 4}), s * e, 1e-13);
}

TEST(Jet, QuotientAndPowAgreeWithFiniteDifferences) {
  auto g = [](double a, double b) { return std::pow(1.0 + a * a + b, 1.5) / (2.0 + std::cos(b)); };
  Point<2> p{0.4, 0.2};
  auto x = Jet<2>::variables(p, 2);
  Jet<2> f = pow(Jet<2>(1.0) + x[0] * x[0] + x[1], 1.5) / (Jet<2>(2.0) + cos(x[1]));
  double h = 1e-4;
  double fxy = (g(p[0] + h, p[1] + h) - g(p[0] + h, p[1] - h) - g(p[0] - h, p[1] + h) + g(p[0] - h, p[1] - h)) /
               (4 * h * h);
  EXPECT_NEAR(f.value(), g(p[0], p[1]), 1e-14);
  EXPECT_NEAR(f.derivative({1, 1}), fxy, 1e-6);
}

TEST(Jet, DerivativesBeyondOrderVanish) {
  auto x = Jet<2>::variables({1.0, 2.0}, 2);
  Jet<2> f = x[0] * x[0] * x[1];
  EXPECT_EQ(f.derivative({2, 1}), 0.0);
  EXPECT_DOUBLE_EQ(f.derivative({1, 1}), 2.0);
}

TEST(Gauss, IntegratesPolynomialsExactly) {
  for (int n = 1; n <= 12; ++n) {
    const auto& g = gauss_rule(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], deg);
      double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      EXPECT_NEAR(s, exact, 1e-13) << "n=" << n << " deg=" << deg;
    }
  }
}

TEST(Gauss, TensorRuleOnBox) {
  Box<2> b{{0.0, 1.0}, {2.0, 1.5}};
  double s = 0.0;
  for_each_gauss_node<2>(b, 3, [&](const Point<2>& p, double w) { s += w * p[0] * p[0] * p[1]; });
  EXPECT_NEAR(s, 8.0 / 3.0 * (1.5 * 1.5 - 1.0) / 2.0, 1e-13);
}

TEST(Simpson, LogIntegral) {
  double v = adaptive_simpson([](double t) { return 1.0 / t; }, 1.0, 8.0, 1e-10);
  EXPECT_NEAR(v, std::log(8.0), 1e-9);
}
