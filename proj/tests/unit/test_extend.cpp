#include <gtest/gtest.h>

#include <random>

#include "sobext/extend/compose.hpp"
#include "sobext/extend/lipschitz.hpp"
#include "sobext/extend/locality.hpp"
#include "sobext/geometry/builtins.hpp"

using namespace sobext;

namespace {

using J = Jet<2>;
using Vars = std::array<J, 2>;

constexpr int kLevel = 7;

GeometryPtr<2> halfplane_geometry() {
  static auto g = build_extension_geometry<2>(half_plane(HalfPlaneSplit::NeumannLine, 1), kLevel, 1);
  return g;
}

GeometryPtr<2> sector_geometry() {
  static auto g = build_extension_geometry<2>(sector(kPi / 4, {}, 1), kLevel, 1);
  return g;
}

std::vector<Point<2>> lattice(const Box<2>& b, int n) {
  std::vector<Point<2>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.push_back({b.lo[0] + (i + 0.5) * b.extent(0) / n, b.lo[1] + (j + 0.5) * b.extent(1) / n});
  return out;
}

JetField<2> smooth_f() {
  return [](const Vars& v) { return v[1] * exp(-1.0 * v[0] * v[0]) + 0.5 * sin(v[0]); };
}

}  // namespace

TEST(Ramp, EndpointsAndFlatness) {
  for (int n = 1; n <= 4; ++n) {
    Ramp r(n);
    EXPECT_EQ(r(-0.5), 0.0);
    EXPECT_EQ(r(1.5), 1.0);
    EXPECT_NEAR(r(0.5), 0.5, 1e-14);
    double prev = 0.0;
    for (int i = 1; i < 100; ++i) {
      double v = r(i / 100.0);
      EXPECT_GE(v, prev);
      prev = v;
    }
    auto check_flat = [&](double t) {
      auto j = r(Jet<1>::variables({t}, n)[0]);
      for (int d = 1; d <= n; ++d) EXPECT_NEAR(j.derivative_at(d), 0.0, 1e-6) << "n=" << n << " t=" << t;
    };
    check_flat(1e-12);
    check_flat(1.0 - 1e-12);
  }
}

TEST(Partition, SumsToOneOnCoveredNodes) {
  for (auto g : {halfplane_geometry(), sector_geometry()}) {
    long covered = 0;
    for (const auto& x : lattice(g->dom.window, 160)) {
      int q = -1;
      if (g->locate(x, &q) != Region::Exterior) continue;
      EXPECT_GE(g->pou.psi_sum(x, q), 0.25 - 1e-12);
      if (!g->pou.covered(x, q)) continue;
      ++covered;
      double s = 0.0;
      for (const auto& t : g->pou.phis(x, q, 1)) s += t.phi.value();
      ASSERT_NEAR(s, 1.0, 1e-10) << g->dom.name << " at " << to_string<2>(x);
    }
    EXPECT_GT(covered, 1000);
  }
}

TEST(Partition, SupportInsideDilatedCube) {
  auto g = sector_geometry();
  const auto& ext = *g->c.ext;
  for (const auto& x : lattice(g->dom.window, 97)) {
    int q = -1;
    if (g->locate(x, &q) != Region::Exterior) continue;
    for (const auto& t : g->pou.phis(x, q, 0)) {
      const auto& Q = ext.cubes[t.j];
      Box<2> big = Box<2>::cube(Q.center(), Q.side() * 17.0 / 32.0);
      EXPECT_TRUE(big.contains(x));
    }
  }
  // psi_j vanishes on the boundary of (17/16) Q_j.
  const auto& Q = ext.cubes[0];
  Point<2> c = Q.center();
  double h = Q.side() * 17.0 / 32.0;
  EXPECT_EQ(g->pou.psi(0, J::variables({c[0] + h, c[1]}, 0)).value(), 0.0);
  EXPECT_EQ(g->pou.psi(0, J::variables({c[0], c[1] - h}, 0)).value(), 0.0);
  EXPECT_EQ(g->pou.psi(0, J::variables(c, 0)).value(), 1.0);
}

TEST(Partition, ShrunkSupportBreaksInvariant) {
  auto base = halfplane_geometry();
  PartitionOfUnity<2> bad(base->c.ext, base->c.in_we, 1, 15.0 / 32);
  long broken = 0;
  for (const auto& x : lattice(base->dom.window, 160)) {
    int q = -1;
    if (base->locate(x, &q) != Region::Exterior) continue;
    double s = 0.0;
    for (const auto& t : bad.phis(x, q, 0)) s += t.phi.value();
    broken += std::abs(s - 1.0) > 1e-10;
  }
  EXPECT_GT(broken, 0);
}

TEST(Partition, DerivativeBoundsScaleWithDiameter) {
  // ||d^alpha phi_j||_inf <= C_phi diam^-|alpha| with one constant.
  auto g = halfplane_geometry();
  const auto& ext = *g->c.ext;
  double c_phi = 0.0;
  for (const auto& x : lattice(g->dom.window, 200)) {
    int q = -1;
    if (g->locate(x, &q) != Region::Exterior) continue;
    for (const auto& t : g->pou.phis(x, q, 1)) {
      double d = ext.cubes[t.j].diam();
      c_phi = std::max({c_phi, std::abs(t.phi.value()), d * std::abs(t.phi.derivative_at(1)),
                        d * std::abs(t.phi.derivative_at(2))});
    }
  }
  EXPECT_GT(c_phi, 1.0);
  EXPECT_LT(c_phi, 200.0);
}

TEST(Extension, EqualsFOnOmegaExactly) {
  auto g = sector_geometry();
  auto bat = cutoff_battery(g->dom);
  for (const auto& t : {bat[1], bat[5], bat[14]}) {
    ExtendedFunction<2> E(g, t.f);
    for (const auto& x : lattice(g->dom.window, 64))
      if (g->dom.inside(x)) ASSERT_EQ(E(x), t.f(J::variables(x, 0)).value());
  }
}

TEST(Extension, VanishesNearDirichletPart) {
  auto g = sector_geometry();
  for (const auto& t : cutoff_battery(g->dom)) {
    ExtendedFunction<2> E(g, t.f);
    for (const auto& x : lattice(g->dom.window, 128)) {
      if (g->dom.dset(x) >= t.gap / 2) continue;
      auto r = g->locate(x);
      if (r == Region::Unresolved) continue;
      ASSERT_EQ(E(x), 0.0) << t.name << " at " << to_string<2>(x);
    }
  }
}

TEST(Extension, Linear) {
  auto g = sector_geometry();
  auto bat = cutoff_battery(g->dom);
  const auto& f = bat[4].f;
  const auto& h = bat[10].f;
  const double a = 1.7, b = -0.4;
  ExtendedFunction<2> Ef(g, f), Eh(g, h), Es(g, [&](const Vars& v) { return a * f(v) + b * h(v); });
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int tested = 0;
  while (tested < 100) {
    Point<2> x{u(rng), u(rng)};
    auto r = g->locate(x);
    if (r == Region::Unresolved || r == Region::Outside) continue;
    auto s = Es.eval(x, 1), e1 = Ef.eval(x, 1), e2 = Eh.eval(x, 1);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(s.derivative_at(i), a * e1.derivative_at(i) + b * e2.derivative_at(i), 1e-10);
    ++tested;
  }
}

TEST(Extension, IndependentReimplementation) {
  // Ef(x) = sum_j psi_j(x) c_j / sum_i psi_i(x) with k = 1: c_j is the mean of
  // the zero extension over Q_j*, psi a product of quintic smoothsteps.
  auto g = halfplane_geometry();
  JetField<2> f = [](const Vars& v) { return v[1] * exp(-1.0 * v[0] * v[0]); };
  ExtendedFunction<2> E(g, f);
  const auto& ext = *g->c.ext;
  auto step = [](double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
  };
  auto psi = [&](int j, const Point<2>& x) {
    const auto& Q = ext.cubes[j];
    double r = 1.0;
    for (int a = 0; a < 2; ++a) r *= step((17.0 / 32 - std::abs(x[a] - Q.center()[a]) / Q.side()) * 16.0);
    return r;
  };
  auto mean = [&](const Box<2>& b) {
    const int n = 400;
    double s = 0.0;
    for (const auto& y : lattice(b, n)) s += y[1] < 0.0 ? y[1] * std::exp(-y[0] * y[0]) : 0.0;
    return s / (n * n);
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), uy(0.02, 1.0);
  int probes = 0;
  while (probes < 10) {
    Point<2> x{ux(rng), uy(rng)};
    if (g->locate(x) != Region::Exterior) continue;
    double num = 0.0, den = 0.0;
    for (int j = 0; j < ext.size(); ++j) {
      double p = psi(j, x);
      if (p == 0.0) continue;
      den += p;
      if (!g->c.in_we[j]) continue;
      num += p * mean(g->c.gam->cubes[g->refl.of(g->c, j).star].box());
    }
    EXPECT_NEAR(E(x), num / den, 2e-6) << to_string<2>(x);
    ++probes;
  }
}

TEST(Extension, UnresolvedQueryThrows) {
  auto g = halfplane_geometry();
  Point<2> x{0.1, 1e-6};
  ASSERT_EQ(g->locate(x), Region::Unresolved);
  ExtendedFunction<2> E(g, smooth_f());
  try {
    E(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnresolvedQuery);
  }
}

TEST(Extension, ExteriorDerivativesMatchDifferences) {
  // Along random exterior segments the analytic derivative agrees with
  // central differences, with second-order convergence.
  auto g = sector_geometry();
  ExtendedFunction<2> E(g, cutoff_battery(g->dom)[6].f);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5), uy(0.2, 1.5), ang(0.0, 2 * kPi);
  int segments = 0;
  while (segments < 10) {
    Point<2> x{u(rng), uy(rng)};
    double t = ang(rng);
    Point<2> dir{std::cos(t), std::sin(t)};
    int q = -1;
    if (g->locate(x, &q) != Region::Exterior) continue;
    double h = 1e-3 * g->c.ext->cubes[q].side();
    bool ok = true;
    for (double s : {-2.0, 2.0})
      ok = ok && g->locate(add<2>(x, scale<2>(dir, s * h))) == Region::Exterior;
    if (!ok) continue;
    auto j = E.eval(x, 1);
    double exact = j.derivative_at(1) * dir[0] + j.derivative_at(2) * dir[1];
    auto fd = [&](double hh) {
      return (E(add<2>(x, scale<2>(dir, hh))) - E(add<2>(x, scale<2>(dir, -hh)))) / (2 * hh);
    };
    double e1 = std::abs(fd(2 * h) - exact), e2 = std::abs(fd(h) - exact);
    EXPECT_LT(e2, 1e-3 * (1.0 + std::abs(exact)));
    if (e2 > 1e-9) EXPECT_GT(e1 / e2, 3.0);
    ++segments;
  }
}

TEST(Norms, SinGradientNormClosedForm) {
  // ||sin x||_{W^{1,2}([0,1]^2)}^2 = int sin^2 + cos^2 = 1.
  std::function<J(const Point<2>&, int)> g = [](const Point<2>& x, int o) {
    return sin(J::variables(x, o)[0]);
  };
  double v = sobolev_norm<2>(g, [](const Point<2>&) { return true; }, {{0, 0}, {1, 1}}, 1, 2.0, 256);
  EXPECT_NEAR(v, 1.0, 1e-4);
  std::function<J(const Point<2>&, int)> c = [](const Point<2>&, int o) { return J(3.0, o); };
  EXPECT_NEAR(sobolev_norm<2>(c, [](const Point<2>&) { return true; }, {{0, 0}, {1, 1}}, 0, 2.0, 64), 3.0, 1e-12);
  auto half = [](const Point<2>& x) { return x[0] < 0.5; };
  EXPECT_LE(sobolev_norm<2>(g, half, {{0, 0}, {1, 1}}, 1, 2.0, 128),
            sobolev_norm<2>(g, [](const Point<2>&) { return true; }, {{0, 0}, {1, 1}}, 1, 2.0, 128));
}

TEST(Norms, PureDirichletRatioIsOne) {
  auto dom = dirichlet_disk();
  auto g = build_extension_geometry<2>(dom, kLevel, 1);
  auto st = make_stencil<2>(g, dom.window, 64, 1);
  for (const auto& r : operator_norm_estimate<2>(st, cutoff_battery(dom), {1.0, 2.0, 4.0})) {
    EXPECT_EQ(r.ratio[0], 1.0);
    EXPECT_EQ(r.exterior_ratio[0], 0.0);
  }
}

TEST(Norms, HalfPlaneRatioStableUnderRefinement) {
  auto g = halfplane_geometry();
  auto bat = cutoff_battery(g->dom, {8});
  Box<2> box = Box<2>::symmetric(1.0);
  auto a = operator_norm_estimate<2>(make_stencil<2>(g, box, 32, 1), bat, 2.0);
  auto b = operator_norm_estimate<2>(make_stencil<2>(g, box, 64, 1), bat, 2.0);
  for (int l = 0; l <= 1; ++l) {
    EXPECT_GT(a.ratio[l], 1.0);
    EXPECT_NEAR(a.ratio[l] / b.ratio[l], 1.0, 0.02);
  }
  EXPECT_LT(a.shell_fraction, 0.02);
}

TEST(TestFunctions, CutoffProperties) {
  auto dom = sector(kPi / 4);
  auto prof = profile_library()[0].second;
  auto t = make_test_function<2>(dom, "one", prof, 16);
  EXPECT_DOUBLE_EQ(t.gap, 1.0 / 16);
  EXPECT_EQ(t.f(J::variables({-1.0, -0.5 / 16}, 0)).value(), 0.0);
  EXPECT_EQ(t.f(J::variables({-1.0, -2.5 / 16}, 0)).value(), 1.0);
  auto free = make_test_function<2>(dirichlet_disk(), "one", prof, 16);
  EXPECT_EQ(free.f(J::variables({0.0, 0.0}, 0)).value(), 1.0);
  auto open = make_test_function<2>(half_plane(HalfPlaneSplit::NeumannLine), "one", prof, 16);
  EXPECT_TRUE(std::isinf(open.gap));
  EXPECT_EQ(open.f(J::variables({0.0, -1e-9}, 0)).value(), 1.0);
}

TEST(TestFunctions, SupFDistanceDecreasesWithN) {
  auto dom = sector(kPi / 4);
  auto prof = vanishing_on_d<2>(dom, profile_library()[5].second);
  double prev = kInf;
  for (double n : {4.0, 8.0, 16.0}) {
    auto t = make_test_function<2>(dom, "p", prof, n);
    double d = 0.0;
    for (const auto& x : lattice(Box<2>::symmetric(2.0), 128))
      if (dom.inside(x)) d = std::max(d, std::abs(t.f(J::variables(x, 0)).value() - prof(J::variables(x, 0)).value()));
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(TestFunctions, ZeroExtendIsIsometry) {
  auto dom = sector(kPi / 4);
  auto t = cutoff_battery(dom)[4];
  auto gf = sample<2>(dom, t, Box<2>::symmetric(2.0), 64);
  auto all = [](const Point<2>&) { return true; };
  auto ze = zero_extend<2>(gf, all);
  for (double p : {1.0, 2.0, kInf}) EXPECT_DOUBLE_EQ(grid_lp_norm<2>(gf, all, p), grid_lp_norm<2>(ze, all, p));
  for (std::size_t i = 0; i < ze.size(); ++i)
    if (!dom.inside(ze.node(i))) ASSERT_EQ(ze.values[i], 0.0);
}

TEST(TestFunctions, CuspDistanceJetMatchesDifferences) {
  auto dom = exterior_cusp(kPi / 4, 2.0);
  for (Point<2> x : {Point<2>{0.5, -0.1}, Point<2>{0.3, 0.2}, Point<2>{1.0, -0.5}, Point<2>{0.2, -0.01}}) {
    auto j = dist_d_jet<2>(dom, J::variables(x, 2));
    EXPECT_NEAR(j.value(), dom.dset(x), 1e-10);
    const double h = 1e-5;
    for (int a = 0; a < 2; ++a) {
      Point<2> p = x, m = x;
      p[a] += h;
      m[a] -= h;
      EXPECT_NEAR(j.derivative_at(1 + a), (dom.dset(p) - dom.dset(m)) / (2 * h), 1e-6);
    }
    Point<2> p = x, m = x;
    p[0] += 1e-4;
    m[0] -= 1e-4;
    double fd2 = (dom.dset(p) - 2 * dom.dset(x) + dom.dset(m)) / 1e-8;
    EXPECT_NEAR(j.derivative(MultiIndex<2>{2, 0}), fd2, 1e-3);
  }
}

TEST(Locality, PerturbationFarAwayChangesNothing) {
  auto g = halfplane_geometry();
  std::vector<Point<2>> centers = {{0.5, 0}, {-0.5, 0}, {0.25, 0}, {1.0, 0}, {-1.0, 0}};
  auto rows = locality_report<2>(g, smooth_f(), centers, {0.125, 0.0625}, 1, 2.0);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& r : rows) {
    EXPECT_GT(r.kappa, 0.0);
    EXPECT_LE(r.max_change, 1e-12);
    EXPECT_GT(r.exterior_nodes, 0);
    EXPECT_TRUE(std::isfinite(r.homogeneous));
  }
}

TEST(Locality, NearbyPerturbationIsSeen) {
  // kappa = 1 is not enough: the exterior reads f from reflected cubes.
  auto g = halfplane_geometry();
  Point<2> c{0.5, 0.0};
  double r = 0.125;
  ExtendedFunction<2> E(g, smooth_f());
  auto pert = outside_ball_perturbation<2>(c, r);
  auto f = smooth_f();
  ExtendedFunction<2> Eg(g, [&](const Vars& v) { return f(v) + pert(v); });
  double change = 0.0;
  for (const auto& x : ball_nodes<2>(c, r, 32))
    if (g->locate(x) == Region::Exterior) change = std::max(change, std::abs(Eg(x) - E(x)));
  EXPECT_GT(change, 1e-6);
}

TEST(Lipschitz, BoundaryProbesDecayLinearly) {
  auto g = halfplane_geometry();
  ExtendedFunction<2> E(g, smooth_f());
  auto rep = lipschitz_continuity_probe<2>(E, {{0.3, 0}, {-0.7, 0}, {1.1, 0}}, {0, 1}, 2, 6);
  EXPECT_GE(rep.rows.size(), 12u);
  EXPECT_NEAR(rep.slope, 1.0, 0.15);
  EXPECT_LT(rep.max_ratio, 2.0);
}

TEST(Lipschitz, SteinCutoffBound) {
  // |(f phi_n)'| <= |f'| + |f| n |S'| with |f| <= Lip(f) dist <= 2 Lip(f) / n.
  auto g = sector_geometry();
  auto st = make_stencil<2>(g, Box<2>::symmetric(1.0), 32, 1);
  auto rep = lipschitz_report(st, {8, 32}, 96);
  EXPECT_EQ(rep.rows.size(), 24u);
  EXPECT_LE(rep.stein_constant, 1.0 + 2.0 * 35.0 / 16.0);
  EXPECT_GT(rep.extension_constant, 1.0);
  EXPECT_TRUE(std::isfinite(rep.extension_constant));
}

TEST(Compose, SameDomainMatchesDirectExtension) {
  auto dom = half_plane(HalfPlaneSplit::NeumannLine, 1);
  auto ce = compose_reference<2>(dom, dom, kLevel, 1);
  ExtendedFunction<2> direct(halfplane_geometry(), smooth_f());
  auto composed = ce.extend(smooth_f());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int probes = 0;
  while (probes < 10) {
    Point<2> x{u(rng), u(rng)};
    auto r = ce.geometry->locate(x);
    if (r == Region::Unresolved || r == Region::OnGamma) continue;
    EXPECT_NEAR(composed(x), direct(x), 1e-12);
    ++probes;
  }
}

TEST(Compose, RejectsNonSuperset) {
  try {
    compose_reference<2>(sector(kPi / 4, {}, 1), dirichlet_disk(), kLevel, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotASuperset);
  }
}

TEST(Compose, ExteriorCuspThroughWedgeComplement) {
  auto dom = exterior_cusp(kPi / 4, 2.0, 1);
  auto ce = compose_reference<2>(dom, wedge_complement(kPi / 4, 1), kLevel, 1);
  std::vector<TestFunction<2>> bat;
  for (const auto& t : cutoff_battery(dom, {8})) bat.push_back(ce.zero_extended(t));
  auto st = make_stencil<2>(ce.geometry, Box<2>::symmetric(1.0), 32, 1);
  auto rep = operator_norm_estimate<2>(st, bat, 2.0);
  for (double r : rep.ratio) {
    EXPECT_TRUE(std::isfinite(r));
    EXPECT_GE(r, 1.0);
  }
  EXPECT_EQ(zero_extension_straddle<2>(dom, cutoff_battery(dom, {8})[4].f, 1e-4), 0.0);
}
