#include <gtest/gtest.h>

#include <chrono>
#include <queue>
#include <random>

#include "sobext/geometry/builtins.hpp"
#include "sobext/qhmetric/qh_graph.hpp"

using namespace sobext;

namespace {

// Independent fine-grid Dijkstra in the upper half-plane with exact segment
// weights L ln(y2/y1)/(y2-y1); used as the oracle for the half-plane values.
double grid_half_plane_qhdist(P2 a, P2 b, double h, double xr, double ylo, double yhi) {
  int nx = int(2 * xr / h) + 1, ny = int((yhi - ylo) / h) + 1;
  auto id = [&](int i, int j) { return j * nx + i; };
  auto pt = [&](int i, int j) { return P2{-xr + i * h, ylo + j * h}; };
  auto seg = [](P2 p, P2 q) {
    double L = distance<2>(p, q);
    if (std::abs(q[1] - p[1]) < 1e-14) return L / p[1];
    return L * std::log(q[1] / p[1]) / (q[1] - p[1]);
  };
  std::vector<double> dist(nx * ny, kInf);
  int si = int(std::lround((a[0] + xr) / h)), sj = int(std::lround((a[1] - ylo) / h));
  int ti = int(std::lround((b[0] + xr) / h)), tj = int(std::lround((b[1] - ylo) / h));
  using E = std::pair<double, int>;
  std::priority_queue<E, std::vector<E>, std::greater<E>> pq;
  dist[id(si, sj)] = 0;
  pq.push({0, id(si, sj)});
  const int moves[16][2] = {{1, 0}, {-1, 0}, {0, 1},  {0, -1}, {1, 1},  {1, -1}, {-1, 1}, {-1, -1},
                            {2, 1}, {2, -1}, {-2, 1}, {-2, -1}, {1, 2}, {1, -2}, {-1, 2}, {-1, -2}};
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    int i = u % nx, j = u / nx;
    if (i == ti && j == tj) return d;
    for (auto& m : moves) {
      int i2 = i + m[0], j2 = j + m[1];
      if (i2 < 0 || j2 < 0 || i2 >= nx || j2 >= ny) continue;
      double w = seg(pt(i, j), pt(i2, j2));
      if (d + w < dist[id(i2, j2)]) {
        dist[id(i2, j2)] = d + w;
        pq.push({d + w, id(i2, j2)});
      }
    }
  }
  return kInf;
}

}  // namespace

TEST(QhMetric, EmptyGammaGivesZero) {
  QhGraph<2> G(dirichlet_disk(), 8, 1);
  EXPECT_EQ(G.distance({0.1, 0.2}, {-0.5, 0.3}).value, 0.0);
}

TEST(QhMetric, HalfPlaneLogBenchmark) {
  double oracle = grid_half_plane_qhdist({0, 1}, {0, 2}, 1.0 / 64, 1.0, 0.5, 2.5);
  EXPECT_NEAR(oracle, std::log(2.0), 0.01);
  QhGraph<2> G(half_plane(), 10, 2);
  auto r = G.distance({0, 1}, {0, 2});
  EXPECT_EQ(r.refine, 2);
  EXPECT_NEAR(r.value, std::log(2.0), 0.02);
  for (double t : {2.0, 4.0, 8.0}) {
    double v = G.distance({0, 1}, {0, t}).value;
    EXPECT_LE(std::abs(v - std::log(t)), 0.03 * std::log(t)) << t;
  }
}

TEST(QhMetric, SeparatedComponentsAreInfinite) {
  QhGraph<2> G(half_plane(), 8, 1);
  auto r = G.distance({0, 1}, {0, -1});
  EXPECT_EQ(r.value, kInf);
  EXPECT_TRUE(r.windowed);
  EXPECT_THROW(G.distance({0.5, 0.0}, {0, 1}), Error);
}

TEST(QhMetric, TriangleInequalityOnSampledTriples) {
  auto dom = sector(kPi / 4);
  QhGraph<2> G(dom, 9, 1);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int tested = 0;
  while (tested < 20) {
    P2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    bool ok = true;
    for (auto& p : {a, b, c}) ok = ok && dom.gamma(p) > 0.1;
    if (!ok) continue;
    double ab = G.distance(a, b).value, bc = G.distance(b, c).value, ac = G.distance(a, c).value;
    EXPECT_LE(ac, ab + bc + 1e-6);
    ++tested;
  }
}

TEST(QhMetric, RefinementNeverIncreasesDistance) {
  auto dom = sector(kPi / 4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<std::pair<P2, P2>> pairs;
  while (pairs.size() < 10) {
    P2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    if (dom.gamma(a) > 0.1 && dom.gamma(b) > 0.1) pairs.push_back({a, b});
  }
  QhGraph<2> g0(dom, 8, 0), g1(dom, 8, 1), g2(dom, 8, 2);
  for (auto& [a, b] : pairs) {
    double d0 = g0.distance(a, b).value, d1 = g1.distance(a, b).value, d2 = g2.distance(a, b).value;
    EXPECT_LE(d1, d0 + 1e-12);
    EXPECT_LE(d2, d1 + 1e-12);
  }
}

TEST(QhMetric, ChainsAndReverseBound) {
  QhGraph<2> G(half_plane(), 10, 1);
  auto same = G.intersecting_chain({0.3, 1.2}, {0.35, 1.25}, 100);
  ASSERT_TRUE(same);
  EXPECT_EQ(same->length(), 1);
  auto ch = G.intersecting_chain({0, 1}, {0, 2}, 100);
  ASSERT_TRUE(ch);
  EXPECT_LE(ch->length(), 8);
  const auto& W = G.whitney();
  for (std::size_t i = 1; i < ch->cubes.size(); ++i)
    EXPECT_TRUE(cubes_intersect(W.cubes[ch->cubes[i - 1]], W.cubes[ch->cubes[i]]));
  EXPECT_LE(G.distance({0, 1}, {0, 2}).value, ch->length() + 0.01);
  EXPECT_EQ(G.distance({0.3, 1.2}, {0.3, 1.2}).value, 0.0);
}

TEST(QhMetric, EquivalenceReportSmall) {
  auto dom = sector(kPi / 4);
  QhGraph<2> G(dom, 9, 1);
  auto t0 = std::chrono::steady_clock::now();
  auto rows = chain_qhdist_equivalence_report(G, dom, 100, 42);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  RecordProperty("seconds", std::to_string(secs));
  for (const auto& r : rows) {
    EXPECT_LE(r.qhdist, r.chain + 0.01);
    EXPECT_GE(r.chain, 1);
  }
  auto env = chain_envelope(rows);
  ASSERT_FALSE(env.empty());
  for (int v : env) EXPECT_LT(v, 1000);
}
