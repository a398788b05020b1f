#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "sobext/geometry/domain_file.hpp"

using namespace sobext;

namespace {

std::vector<Domain2> all_builtins() {
  return {half_plane(HalfPlaneSplit::NeumannLine), half_plane(HalfPlaneSplit::MixedRay),
          half_plane(HalfPlaneSplit::DirichletLine), dirichlet_disk(),
          sector(kPi / 4), sector(kPi / 4, {SectorOuter::Wedge, kPi / 2}),
          cusp_at_zero(2.0), cusp_at_infinity(1.0), exterior_cusp(kPi / 4), wedge_complement(kPi / 4)};
}

double brute_ray_distance(const P2& p, const P2& a, const P2& u) {
  double best = kInf;
  for (int i = 0; i <= 400000; ++i) best = std::min(best, distance<2>(p, add<2>(a, scale<2>(u, i * 1e-4))));
  return best;
}

}  // namespace

TEST(Classify, BuiltinExamples) {
  EXPECT_EQ(classify_point(half_plane(), {0.3, -1.0}), PointClass::Interior);
  EXPECT_EQ(classify_point(sector(kPi / 4), {1.0, 0.0}), PointClass::OnGamma);
  EXPECT_EQ(classify_point(cusp_at_zero(2.0), {0.5, -0.25}), PointClass::OnD);
}

TEST(DistToSet, Examples) {
  EXPECT_DOUBLE_EQ(dist_to_set(half_plane(), {2.0, 3.0}, BoundaryPart::Gamma), 3.0);
  EXPECT_EQ(dist_to_set(dirichlet_disk(), {0.2, 0.1}, BoundaryPart::Gamma), kInf);
  EXPECT_EQ(dist_to_set(dirichlet_disk(), {5.0, -1.0}, BoundaryPart::Gamma), kInf);
  // Dense sampling of the ray confirms the closed form before the value is frozen.
  double oracle = brute_ray_distance({-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0});
  EXPECT_NEAR(oracle, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(dist_to_set(sector(kPi / 4), {-1.0, 0.0}, BoundaryPart::Gamma), 1.0);
}

TEST(Oracles, BoundaryIsMinOfParts) {
  std::mt19937_64 rng(7);
  for (const auto& d : all_builtins()) {
    std::uniform_real_distribution<double> ux(d.window.lo[0], d.window.hi[0]), uy(d.window.lo[1], d.window.hi[1]);
    for (int i = 0; i < 10000; ++i) {
      P2 p{ux(rng), uy(rng)};
      double g = d.gamma(p), dd = d.dset(p);
      EXPECT_NEAR(std::min(g, dd), d.boundary(p), 1e-9) << d.name << " " << to_string<2>(p);
      if (d.inside(p)) {
        EXPECT_GT(d.boundary(p), 0.0);
      }
    }
  }
}

TEST(Oracles, CuspCurveDistanceMatchesBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    P2 p{u(rng), u(rng)};
    double best = kInf, tb = 0.0;
    for (int k = 0; k <= 4000; ++k) {
      double t = k * 1e-3, v = distance<2>(p, {t, -t * t});
      if (v < best) best = v, tb = t;
    }
    for (int k = -100000; k <= 100000; ++k) {
      double t = std::max(0.0, tb + k * 2e-8);
      best = std::min(best, distance<2>(p, {t, -t * t}));
    }
    EXPECT_NEAR(cusp_at_zero(2.0).dset(p), best, 2e-9) << to_string<2>(p);
  }
}

TEST(Oracles, ExactBoxDistanceAgreesWithDenseSampling) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0), s(0.05, 1.0);
  for (const auto& d : {half_plane(HalfPlaneSplit::MixedRay), sector(kPi / 4, {SectorOuter::Wedge, kPi / 2}),
                        dirichlet_disk()}) {
    for (int i = 0; i < 200; ++i) {
      B2 b = B2::cube({u(rng), u(rng)}, s(rng));
      for (const auto* o : {&d.gamma, &d.dset, &d.closure}) {
        if (o->is_empty || !o->box_distance) continue;
        double best = kInf;
        for (int a = 0; a <= 60; ++a)
          for (int c = 0; c <= 60; ++c)
            best = std::min(best, (*o)({b.lo[0] + a * b.extent(0) / 60, b.lo[1] + c * b.extent(1) / 60}));
        double ex = o->box_distance(b);
        EXPECT_LE(ex, best + 1e-12);
        EXPECT_GE(ex, best - b.diam() / 60);
      }
    }
  }
}

TEST(Builtins, CuspAtZeroClassification) {
  auto d = cusp_at_zero(2.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double x = u(rng);
    EXPECT_EQ(classify_point(d, {x, -x * x}), PointClass::OnD);
    EXPECT_EQ(classify_point(d, {x, -x * x / 2}), PointClass::Exterior);
  }
}

TEST(Builtins, HalfPlaneTranslationInvariance) {
  auto d = half_plane(HalfPlaneSplit::NeumannLine);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int i = 0; i < 100; ++i) {
    P2 p{u(rng), u(rng)};
    P2 q{p[0] + u(rng), p[1]};
    EXPECT_NEAR(d.gamma(p), d.gamma(q), 1e-12);
    EXPECT_NEAR(d.boundary(p), d.boundary(q), 1e-12);
    EXPECT_EQ(d.inside(p), d.inside(q));
  }
}

TEST(Builtins, WedgeOuterSectorLooksLikeLowerHalfInsideSector) {
  auto d = sector(kPi / 4, {SectorOuter::Wedge, kPi / 2});
  EXPECT_TRUE(d.inside({1.0, -0.5}));
  EXPECT_FALSE(d.inside({1.0, 0.5}));
  EXPECT_FALSE(d.inside({0.0, 1.0}));
  EXPECT_TRUE(d.inside({-1.0, 1.0}));
  EXPECT_EQ(classify_point(d, {0.0, 2.0}), PointClass::OnD);
  EXPECT_EQ(classify_point(d, {2.0, 0.0}), PointClass::OnGamma);
}

TEST(Sampled, CrossValidatesAgainstAnalytic) {
  const double h = 1e-2;
  std::mt19937_64 rng(13);
  for (const auto& d : {half_plane(HalfPlaneSplit::MixedRay), sector(kPi / 4), cusp_at_zero(2.0)}) {
    auto s = sampled_from_pieces(d, h);
    EXPECT_EQ(s.tol_b(), h);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int i = 0; i < 2000; ++i) {
      P2 p{u(rng), u(rng)};
      EXPECT_LE(std::abs(s.gamma(p) - d.gamma(p)), h);
      EXPECT_LE(std::abs(s.dset(p) - d.dset(p)), h);
      EXPECT_NEAR(std::min(s.gamma(p), s.dset(p)), s.boundary(p), 2 * h);
    }
  }
}

TEST(DomainFile, ParsesBuiltinWithClaimsAndWindow) {
  auto d = parse_domain("kind = sector\ntheta = 0.5\nwindow = -4 -4 4 4\nclaimed = 0.1 2 6 0.5\n");
  EXPECT_EQ(d.name, "sector");
  EXPECT_DOUBLE_EQ(d.window.hi[0], 4.0);
  ASSERT_TRUE(d.claimed.has_value());
  EXPECT_DOUBLE_EQ(d.claimed->K, 6.0);
  EXPECT_THROW(parse_domain("theta = 1\n"), Error);
  EXPECT_THROW(parse_domain("kind = sector\ntheta = abc\n"), Error);
  EXPECT_THROW(parse_domain("kind = nosuch\n"), Error);
}

TEST(DomainFile, PolygonAndBinaryCloudRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "sobext_test_clouds";
  std::filesystem::create_directories(dir);
  std::vector<P2> g, dd;
  for (int i = 0; i <= 400; ++i) g.push_back({i * 0.01, 0.0});
  for (int i = 0; i <= 400; ++i) dd.push_back({-i * 0.01, 0.0});
  write_point_cloud<2>((dir / "g.bin").string(), g);
  write_point_cloud<2>((dir / "d.bin").string(), dd);
  EXPECT_EQ(read_point_cloud<2>((dir / "g.bin").string()).size(), 401u);
  std::ofstream((dir / "dom.txt").string()) << "kind = halfplane\nsplit = mixed\nwindow_m = 2\n"
                                               "oracle = sampled\nh_b = 0.01\n"
                                               "gamma_cloud = g.bin\nd_cloud = d.bin\n";
  auto d = load_domain_file((dir / "dom.txt").string());
  EXPECT_EQ(d.oracle, OracleKind::SampledBoundary);
  EXPECT_NEAR(d.gamma({1.005, 0.5}), 0.5, 1e-4);
  EXPECT_NEAR(d.dset({-2.0, -1.0}), 1.0, 1e-12);

  auto poly = parse_domain("kind = polygon\nvertices = 0,0; 2,0; 2,1; 0,1\nlabels = GDDD\nwindow = -4 -4 4 4\n");
  EXPECT_TRUE(poly.inside({1.0, 0.5}));
  EXPECT_FALSE(poly.inside({3.0, 0.5}));
  EXPECT_EQ(classify_point(poly, {1.0, 0.0}), PointClass::OnGamma);
  EXPECT_EQ(classify_point(poly, {2.0, 0.5}), PointClass::OnD);
  EXPECT_NEAR(poly.gamma({1.0, -0.5}), 0.5, 1e-15);
  EXPECT_THROW(parse_domain("kind = polygon\nvertices = 0,0; 2,0; 2,1; 0,1\nlabels = DNNN\n"), Error);
}
