#include <gtest/gtest.h>

#include "sobext/geometry/builtins.hpp"
#include "sobext/reflect/chains.hpp"

using namespace sobext;

namespace {

struct Built {
  ReflectGeometry<2> geo;
  CubeClassification<2> c;
  ReflectionMap<2> m;
};

Built build(const Domain2& dom, int level, ReflectParams p = {}) {
  Built b{build_geometry<2>(dom, level), {}, {}};
  b.c = classify(b.geo, p);
  b.m = reflect_all(b.c);
  return b;
}

}  // namespace

TEST(Classify, DirichletDiskHasNoExteriorCubes) {
  auto b = build(dirichlet_disk(), 7);
  EXPECT_TRUE(b.c.we.empty());
  EXPECT_GT(b.c.ext->size(), 0);
}

TEST(Classify, NeumannHalfPlaneTakesEverySmallCube) {
  auto b = build(half_plane(HalfPlaneSplit::NeumannLine), 7);
  EXPECT_EQ(int(b.c.we.size()), b.c.ext->size());
}

TEST(Classify, WeCubesSatisfyBothInequalities) {
  auto dom = sector(kPi / 4, SectorOuter{});
  auto b = build(dom, 8);
  for (int q : b.c.we) {
    auto box = b.c.ext->cubes[q].box();
    ASSERT_LT(dom.gamma.box_bounds(box).upper, 8.0 * dom.dset.box_bounds(box).lower);
    // dist(Q, Omega) <= dist(Q, Gamma) <= B dist(Q, Omega)
    double dg = dom.gamma.box_bounds(box).lower, dw = dom.closure.box_bounds(box).lower;
    ASSERT_LE(dw, dg + 1e-12);
    ASSERT_LE(dg, 8.0 * dw + 1e-12);
  }
}

TEST(Classify, SectorCubeNearDirichletRayIsExcluded) {
  // Omega = {y < 0}, Gamma = positive x-axis, D = negative x-axis.
  auto dom = sector(kPi / 4, SectorOuter{});
  auto b = build(dom, 8);
  auto look = b.c.ext->containing({-6.0, 0.6});
  ASSERT_EQ(look.kind, CubeLookup<2>::Cube);
  auto box = b.c.ext->cubes[look.index].box();
  double to_d = box.lo[1];
  double to_gamma = std::hypot(box.hi[0], box.lo[1]);
  EXPECT_GE(to_gamma, 8.0 * to_d);
  EXPECT_FALSE(b.c.in_we[look.index]);
}

TEST(Classify, StrictModeChecksConstants) {
  auto geo = build_geometry<2>(half_plane(HalfPlaneSplit::NeumannLine), 5);
  EXPECT_NO_THROW(classify(geo, ReflectParams::strict()));
  ReflectParams weak{1.0 / 16, 100.0, ParamMode::Strict};
  try {
    classify(geo, weak);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolated);
  }
  auto sec = sector(kPi / 4, SectorOuter{});
  sec.claimed->lambda = 1.0 / 1000;
  EXPECT_THROW(classify(build_geometry<2>(sec, 5), ReflectParams::strict()), Error);
}

TEST(Reflect, HalfPlaneUnitCube) {
  auto b = build(half_plane(HalfPlaneSplit::NeumannLine), 8);
  int q = b.c.ext->find(DyadicCube<2>{0, {0, 2}});
  ASSERT_GE(q, 0);
  auto r = b.m.of(b.c, q);
  ASSERT_EQ(r.status, ReflectStatus::Ok);
  auto star = b.c.gam->cubes[r.star].box();
  EXPECT_LE(star.hi[1], 0.0);
  EXPECT_GE(b.c.gam->cubes[r.star].diam(), std::sqrt(2.0) - 1e-12);
  EXPECT_LE(r.dist_ratio, 25.0);
}

TEST(Reflect, DiameterNeverShrinks) {
  for (auto dom : {half_plane(HalfPlaneSplit::NeumannLine), sector(kPi / 4, SectorOuter{}),
                   half_plane(HalfPlaneSplit::MixedRay)}) {
    auto b = build(dom, 8);
    auto s = reflect_stats(b.c, b.m);
    EXPECT_EQ(s.no_reflection + s.no_reflection_windowed, 0) << dom.name;
    EXPECT_EQ(s.diam_order_violations, 0) << dom.name;
    for (const auto& p : b.m.pairs) ASSERT_GE(p.diam_ratio, 1.0);
  }
}

TEST(Reflect, HalfPlaneCertificatesPinned) {
  auto b = build(half_plane(HalfPlaneSplit::NeumannLine), 8);
  auto s = reflect_stats(b.c, b.m);
  EXPECT_LE(s.c_refl, 25.0);
  EXPECT_NEAR(s.c_refl, 2.5 * std::sqrt(2.0), 1e-9);
  EXPECT_EQ(s.c_pre, 4);
  EXPECT_NEAR(s.c_pair, 1.0, 1e-12);
}

TEST(Reflect, PreimageCountMatchesBruteForce) {
  auto b = build(sector(kPi / 4, SectorOuter{}), 7);
  auto s = reflect_stats(b.c, b.m);
  int best = 0;
  for (const auto& p : b.m.pairs) {
    int n = 0;
    for (const auto& o : b.m.pairs) n += o.star == p.star;
    best = std::max(best, n);
  }
  EXPECT_EQ(s.c_pre, best);
}

TEST(Reflect, CuspAtZeroShowsBlowUp) {
  auto hp = build(half_plane(HalfPlaneSplit::NeumannLine), 8);
  auto hp_stats = reflect_stats(hp.c, hp.m);
  int hp_len = build_fjk(hp.c, hp.m).max_length;
  auto shallow = build(cusp_at_zero(2.0, 1), 8);
  auto deep = build(cusp_at_zero(2.0, 1), 10);
  auto s = reflect_stats(deep.c, deep.m);
  int len8 = build_fjk(shallow.c, shallow.m).max_length;
  int len10 = build_fjk(deep.c, deep.m).max_length;
  bool no_reflection = s.no_reflection > 0;
  bool c_refl_blowup = s.c_refl >= 10 * hp_stats.c_refl;
  bool chain_blowup = len10 >= len8 + 4 && len10 >= 5 * hp_len;
  EXPECT_TRUE(no_reflection || c_refl_blowup || chain_blowup)
      << "C_refl " << s.c_refl << " chain lengths " << len8 << " -> " << len10;
}

TEST(Chains, SelfPairHasLengthOne) {
  auto b = build(half_plane(HalfPlaneSplit::NeumannLine), 6);
  auto f = build_fjk(b.c, b.m);
  int self = 0;
  for (const auto& ch : f.chains)
    if (ch.j == ch.k) {
      ++self;
      ASSERT_EQ(ch.cubes.size(), 1u);
    }
  EXPECT_EQ(self, int(b.c.we.size()));
}

TEST(Chains, FjkChainsTouchAndStayComparable) {
  auto b = build(sector(kPi / 4, SectorOuter{}), 8);
  auto f = build_fjk(b.c, b.m);
  EXPECT_TRUE(f.failures.empty());
  EXPECT_EQ(f.max_length, 9);
  const auto& G = *b.c.gam;
  for (const auto& ch : f.chains) {
    ASSERT_EQ(ch.cubes.front(), b.m.of(b.c, ch.j).star);
    ASSERT_EQ(ch.cubes.back(), b.m.of(b.c, ch.k).star);
    for (std::size_t i = 1; i < ch.cubes.size(); ++i)
      ASSERT_TRUE(cubes_touch(G.cubes[ch.cubes[i - 1]], G.cubes[ch.cubes[i]]));
  }
  EXPECT_GE(f.k1, 1.0 / 16);
  EXPECT_LE(f.k2, 64.0);
}

TEST(Chains, FpTerminalNesting) {
  auto b = build(sector(kPi / 4, SectorOuter{}), 8);
  auto f = build_fp(b.c, b.m);
  EXPECT_FALSE(f.chains.empty());
  EXPECT_TRUE(f.failures.empty());
  EXPECT_EQ(f.nesting_failures, 0);
  EXPECT_GE(f.min_terminal_ratio, 0.5 - 1e-12);
  for (const auto& ch : f.chains) {
    const auto& Qj = b.c.ext->cubes[ch.j];
    const auto& Sm = b.c.gam->cubes[ch.cubes.back()];
    ASSERT_TRUE(cube_within(Sm, Qj) || cube_within(Qj, Sm));
  }
}

TEST(Chains, NeumannHalfPlaneHasNoEscapeChains) {
  auto b = build(half_plane(HalfPlaneSplit::NeumannLine), 7);
  auto f = build_fp(b.c, b.m);
  EXPECT_TRUE(f.fp_sources.empty());
  EXPECT_TRUE(f.chains.empty());
}

TEST(Overlap, CountedNodesLieInDilatedChainCubes) {
  auto b = build(sector(kPi / 4, SectorOuter{}, 2), 6);
  auto fjk = build_fjk(b.c, b.m);
  auto fp = build_fp(b.c, b.m);
  const int n = 64;
  auto h = overlap_histogram(b.c, fjk, fp, n);
  EXPECT_GT(h.max_overlap, 0);
  const auto& win = b.c.ext->window;
  double hx = win.extent(0) / n;
  // Brute force: count per node the distinct j whose F(Q_j) contains it.
  std::unordered_map<int, std::vector<int>> by_j;
  for (int i = 0; i < int(fjk.chains.size()); ++i) {
    by_j[fjk.chains[i].j].push_back(i);
    by_j[fjk.chains[i].k].push_back(i);
  }
  int best = 0;
  long covered = 0;
  for (int iy = 0; iy < n; iy += 3)
    for (int ix = 0; ix < n; ix += 3) {
      Point<2> x{win.lo[0] + (ix + 0.5) * hx, win.lo[1] + (iy + 0.5) * hx};
      int cnt = 0;
      for (int j : b.c.we) {
        bool in = false;
        for (int i : by_j[j])
          for (int q : fjk.chains[i].cubes) in = in || b.c.gam->cubes[q].box().dilated(2.0).contains(x);
        cnt += in;
      }
      covered += cnt > 0;
      best = std::max(best, cnt);
    }
  EXPECT_GT(covered, 0);
  EXPECT_LE(best, h.max_overlap);
  long total = 0;
  for (long c : h.counts) total += c;
  EXPECT_EQ(total, long(n) * n);
}

TEST(Overlap, StableUnderDeeperDecomposition) {
  auto run = [](int level) {
    auto b = build(half_plane(HalfPlaneSplit::NeumannLine), level);
    auto fjk = build_fjk(b.c, b.m);
    auto fp = build_fp(b.c, b.m);
    return overlap_histogram(b.c, fjk, fp, 128).max();
  };
  EXPECT_EQ(run(7), run(8));
}

TEST(Report, ListsConstants) {
  auto r = reflect_report(build_geometry<2>(sector(kPi / 4, SectorOuter{}), 7), ReflectParams{}, 64);
  auto text = format_report(r);
  for (auto key : {"C_refl:", "C_pre:", "maxChainLen:", "maxOverlap:", "failures: 0", "mode: empirical"})
    EXPECT_NE(text.find(key), std::string::npos) << key;
}
