#include <gtest/gtest.h>

#include <random>

#include "sobext/polyfit/polyfit.hpp"

using namespace sobext;

namespace {

using J = Jet<2>;
using Vars = std::array<J, 2>;

Box<2> square(double x0, double y0, double s) { return {{x0, y0}, {x0 + s, y0 + s}}; }

std::vector<std::pair<const char*, JetField<2>>> battery() {
  return {
      {"sin x", [](const Vars& v) { return sin(v[0]); }},
      {"exp(x + y/2)", [](const Vars& v) { return exp(v[0] + 0.5 * v[1]); }},
      {"x^2 y + y^3", [](const Vars& v) { return v[0] * v[0] * v[1] + v[1] * v[1] * v[1]; }},
      {"cos 3x sin 2y", [](const Vars& v) { return cos(3.0 * v[0]) * sin(2.0 * v[1]); }},
      {"1 / (1 + x^2 + y^2)", [](const Vars& v) { return J(1.0) / (1.0 + v[0] * v[0] + v[1] * v[1]); }},
      {"log(2 + x + y)", [](const Vars& v) { return log(2.0 + v[0] + v[1]); }},
  };
}

JetField<2> random_poly(std::mt19937_64& rng, int deg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<MultiIndex<2>, double>> terms;
  for (const auto& m : total_degree_indices<2>(deg)) terms.push_back({m, u(rng)});
  return [terms](const Vars& v) {
    J s(0.0, v[0].order());
    for (const auto& [m, a] : terms) {
      J t(a, v[0].order());
      for (int i = 0; i < m[0]; ++i) t = t * v[0];
      for (int i = 0; i < m[1]; ++i) t = t * v[1];
      s += t;
    }
    return s;
  };
}

}  // namespace

TEST(Legendre, MatchesClosedForms) {
  for (double u : {-0.9, -0.2, 0.3, 0.75}) {
    EXPECT_NEAR(legendre_derivative(2, 0, u), 0.5 * (3 * u * u - 1), 1e-15);
    EXPECT_NEAR(legendre_derivative(3, 0, u), 0.5 * (5 * u * u * u - 3 * u), 1e-15);
    EXPECT_NEAR(legendre_derivative(3, 1, u), 0.5 * (15 * u * u - 3), 1e-14);
    EXPECT_NEAR(legendre_derivative(4, 2, u), (105 * u * u - 15) / 2.0, 1e-12);
  }
  EXPECT_EQ(total_degree_indices<2>(2).size(), 6u);
  EXPECT_EQ(total_degree_indices<3>(3).size(), 20u);
}

TEST(Project, ConstantIsFixed) {
  for (int k = 1; k <= 5; ++k) {
    auto P = project<2>([](const Point<2>&) { return 3.25; }, square(0.5, -1, 0.25), k);
    EXPECT_NEAR(P({0.6, -0.9}), 3.25, 1e-13);
    for (std::size_t i = 1; i < P.coeffs.size(); ++i) EXPECT_NEAR(P.coeffs[i], 0.0, 1e-13);
  }
}

TEST(Project, MeanOfX) {
  auto P = project<2>([](const Point<2>& x) { return x[0]; }, square(0, 0, 1), 1);
  ASSERT_EQ(P.coeffs.size(), 1u);
  EXPECT_NEAR(P.coeffs[0], 0.5, 1e-15);
}

TEST(Project, ReproducesPolynomials) {
  std::mt19937_64 rng(7);
  for (int k = 1; k <= 5; ++k) {
    auto f = random_poly(rng, k - 1);
    auto Q = square(-0.3, 1.1, 0.5);
    auto P = project<2>(value_of<2>(f), Q, k);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      Point<2> x{Q.lo[0] + 0.5 * u(rng), Q.lo[1] + 0.5 * u(rng)};
      EXPECT_NEAR(P(x), value_of<2>(f)(x), 1e-10);
    }
    auto PP = project<2>([&](const Point<2>& x) { return P(x); }, Q, k);
    for (std::size_t i = 0; i < P.coeffs.size(); ++i) EXPECT_NEAR(PP.coeffs[i], P.coeffs[i], 1e-10);
  }
}

TEST(Project, IdempotentAndLinear) {
  auto fs = battery();
  auto Q = square(0.25, 0.5, 0.5);
  for (int k = 1; k <= 4; ++k) {
    auto P = project<2>(value_of<2>(fs[1].second), Q, k);
    auto PP = project<2>([&](const Point<2>& x) { return P(x); }, Q, k);
    for (std::size_t i = 0; i < P.coeffs.size(); ++i) EXPECT_NEAR(PP.coeffs[i], P.coeffs[i], 1e-10);
    auto f = value_of<2>(fs[0].second), g = value_of<2>(fs[3].second);
    auto Pf = project<2>(f, Q, k), Pg = project<2>(g, Q, k);
    auto Ph = project<2>([&](const Point<2>& x) { return 2.5 * f(x) - 0.75 * g(x); }, Q, k);
    for (std::size_t i = 0; i < Ph.coeffs.size(); ++i)
      EXPECT_NEAR(Ph.coeffs[i], 2.5 * Pf.coeffs[i] - 0.75 * Pg.coeffs[i], 1e-10);
  }
}

TEST(Project, MidpointRuleConverges) {
  auto f = [](const Point<2>& x) { return std::sin(x[0]) * std::exp(x[1]); };
  auto Q = square(0, 0, 1);
  auto exact = project<2>(f, Q, 3, 16);
  auto mid = project<2>(f, Q, 3, midpoint_nodes<2>(Q, 256));
  for (std::size_t i = 0; i < exact.coeffs.size(); ++i) EXPECT_NEAR(mid.coeffs[i], exact.coeffs[i], 1e-4);
}

TEST(Project, DegenerateCube) {
  Box<2> flat{{0, 0}, {1, 0}};
  EXPECT_THROW(project<2>([](const Point<2>&) { return 1.0; }, flat, 2), Error);
}

TEST(CubePolynomial, MonomialFormAgrees) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 1; k <= 5; ++k) {
    CubePolynomial<2> P;
    P.box = square(1.5, -2.0, 0.125);
    P.k = k;
    P.basis = total_degree_indices<2>(k - 1);
    for (std::size_t i = 0; i < P.basis.size(); ++i) P.coeffs.push_back(u(rng));
    auto mono = P.to_monomial();
    auto c = P.box.center();
    for (int t = 0; t < 50; ++t) {
      Point<2> x{c[0] + 0.0625 * u(rng), c[1] + 0.0625 * u(rng)};
      double a = P(x), b = eval_monomial<2>(mono, c, x);
      ASSERT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(CubePolynomial, HighDerivativesVanishAndJetMatches) {
  auto P = project<2>([](const Point<2>& x) { return std::exp(x[0] - x[1]); }, square(0, 0, 1), 3);
  Point<2> x{0.3, 0.8};
  EXPECT_EQ(P.derivative(x, {3, 0}), 0.0);
  EXPECT_EQ(P.derivative(x, {1, 2}), 0.0);
  auto j = P.jet(x, 3);
  EXPECT_NEAR(j.derivative({1, 1}), P.derivative(x, {1, 1}), 1e-12);
  EXPECT_NEAR(j.derivative({0, 2}), P.derivative(x, {0, 2}), 1e-12);
  EXPECT_EQ(j.derivative({2, 1}), 0.0);
  // finite-difference cross-check of the first derivative
  double h = 1e-6;
  double fd = (P({x[0] + h, x[1]}) - P({x[0] - h, x[1]})) / (2 * h);
  EXPECT_NEAR(P.derivative(x, {1, 0}), fd, 1e-8);
}

TEST(Poincare, SinOnUnitSquareMatchesClosedForm) {
  auto f = battery()[0].second;
  auto r = poincare_check<2>(f, square(0, 0, 1), std::nullopt, 1, 1, {0, 0}, 2.0);
  double m = 1 - std::cos(1.0);
  double num = std::sqrt(0.5 - std::sin(2.0) / 4 - m * m);
  double den = std::sqrt(2.0) * std::sqrt(0.5 + std::sin(2.0) / 4);
  EXPECT_NEAR(r.numerator, num, 1e-10);
  EXPECT_NEAR(r.ratio, num / den, 1e-10);
  EXPECT_LE(r.ratio, 1.0);
  EXPECT_NEAR(r.ratio, 0.205372, 1e-6);
}

TEST(Poincare, PolynomialHasZeroNumerator) {
  JetField<2> f = [](const Vars& v) { return 1.0 + 2.0 * v[0] - v[1]; };
  auto r = poincare_check<2>(f, square(0, 0, 1), std::nullopt, 2, 2, {0, 0}, 2.0);
  EXPECT_TRUE(r.zero_denominator);
  EXPECT_LE(r.numerator, 1e-10);
  JetField<2> g = [](const Vars& v) { return v[0] * v[0] + 0.0 * v[1]; };
  auto s = poincare_check<2>(g, square(0, 0, 1), std::nullopt, 3, 1, {0, 0}, 2.0);
  EXPECT_LE(s.numerator, 1e-10);
}

TEST(Poincare, VanishingGradientLeavesNoResidual) {
  // nabla^l f = 0 forces deg f < l <= k, which the projection reproduces.
  JetField<2> f = [](const Vars& v) { return v[0] - 3.0 * v[1]; };
  PoincareResult r;
  EXPECT_NO_THROW(r = poincare_check<2>(f, square(0, 0, 1), std::nullopt, 3, 2, {1, 0}, 2.0));
  EXPECT_TRUE(r.zero_denominator);
  EXPECT_EQ(r.ratio, 0.0);
}

TEST(Poincare, ScaleDriftBelowTwentyPercent) {
  for (auto& [name, f] : battery()) {
    for (int k : {1, 2, 3})
      for (double p : {1.0, 2.0, 4.0}) {
        double lo = kInf, hi = 0.0;
        for (double s : {0.125, 0.0625, 0.03125}) {
          auto r = poincare_check<2>(f, square(0.125, 0.25, s), std::nullopt, k, k, {0, 0}, p);
          if (r.zero_denominator) continue;
          lo = std::min(lo, r.ratio);
          hi = std::max(hi, r.ratio);
        }
        if (hi == 0.0) continue;
        EXPECT_LE((hi - lo) / hi, 0.2) << name << " k=" << k << " p=" << p;
      }
  }
}

TEST(Poincare, TouchingCubeAndSubcubeVariants) {
  for (auto& [name, f] : battery()) {
    auto Q = square(0, 0, 0.5);
    std::optional<Box<2>> R = square(0.5, 0, 0.5);
    auto r = poincare_check<2>(f, Q, R, 2, 2, {1, 0}, 2.0);
    EXPECT_TRUE(std::isfinite(r.ratio)) << name;
    EXPECT_LE(r.ratio, 5.0) << name;
    // projection on a quarter subcube, norm on Q
    auto sub = poincare_ratio<2>(f, square(0.25, 0.25, 0.25), {Q}, 2, 2, {0, 0}, 2.0, Q.diam());
    EXPECT_LE(sub.ratio, 5.0) << name;
  }
}

TEST(Stability, ProjectionDerivativesBounded) {
  double worst = 0.0;
  for (auto& [name, f] : battery())
    for (int k : {1, 2, 3})
      for (double p : {1.0, 2.0, kInf})
        for (MultiIndex<2> a : {MultiIndex<2>{0, 0}, MultiIndex<2>{1, 0}, MultiIndex<2>{0, 1}})
          for (double s : {1.0, 0.25}) {
            if (degree<2>(a) > k - 1) continue;
            double r = projection_stability<2>(f, square(0.1, 0.2, s), k, a, p);
            worst = std::max(worst, r);
          }
  EXPECT_LE(worst, 4.0);
}

TEST(NormComparison, ConstantsAndIdentity) {
  CubePolynomial<2> P;
  P.box = square(0, 0, 1);
  P.k = 1;
  P.basis = total_degree_indices<2>(0);
  P.coeffs = {2.0};
  auto Q = square(0, 0, 1), R = square(0.5, 0.5, 0.5);
  EXPECT_NEAR(norm_comparison_check<2>(P, Q, R, 2.0, 0.25), 2.0, 1e-12);
  EXPECT_NEAR(norm_comparison_check<2>(P, Q, R, 1.0, 0.25), 4.0, 1e-12);
  EXPECT_NEAR(norm_comparison_check<2>(P, Q, Q, 3.0, 0.25), 1.0, 1e-12);
  EXPECT_THROW(norm_comparison_check<2>(P, Q, square(0, 0, 0.25), 2.0, 0.25), Error);
}

TEST(NormComparison, RandomQuadraticsBounded) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto Q = square(0, 0, 1), R = square(0.5, 0.0, 0.5);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    CubePolynomial<2> P;
    P.box = Q;
    P.k = 3;
    P.basis = total_degree_indices<2>(2);
    for (std::size_t i = 0; i < P.basis.size(); ++i) P.coeffs.push_back(u(rng));
    worst = std::max(worst, norm_comparison_check<2>(P, Q, R, 2.0, 0.25));
  }
  EXPECT_GT(worst, 2.0);
  EXPECT_LE(worst, 40.0);
}
