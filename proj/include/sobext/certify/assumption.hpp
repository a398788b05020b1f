#pragma once

// Sampling certifier for the (LC), (CC), (QHD), (DC) conditions. It falsifies
// and estimates: a pass only means no violation was found at this sampling.

#include <algorithm>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "../geometry/builtins.hpp"
#include "../qhmetric/qh_graph.hpp"

namespace sobext {

inline constexpr const char* kCertifyNotice =
    "pass means no violation found at this sampling; only failures are certain";

struct CertifyConfig {
  double delta = 1.0;
  int pairs = 400;
  std::uint64_t seed = 1;
  /// Conditions fail below these; 0 takes the domain's claimed value, or the default.
  double eps_floor = 0.0;
  double K_cap = 0.0;
  double lambda_floor = 0.0;
  int max_level = 10;
  int refine = 1;
  int dc_grid = 256;
  /// Share of pairs drawn around Gamma points close to D.
  double junction_share = 0.5;
};

inline constexpr double kDefaultEpsFloor = 1.0 / 16;
inline constexpr double kDefaultKCap = 16.0;
inline constexpr double kDefaultLambdaFloor = 1e-3;
/// Thresholds tried below the widest-path bottleneck.
inline constexpr int kEpsLadder = 7;
inline constexpr int kMarchSteps = 20000;

struct PairRecord {
  Point<2> x{}, y{};
  double sep = 0.0;
  double eps_cc = 1.0;  // carrot constant of the chosen path, capped at 1
  double eps_lc = 1.0;  // |x - y| / length
  double K = 0.0;       // max qhdist(z, Omega) over path vertices
  bool straight = false;
  bool found = true;    // some path in the search ball exists
  std::vector<Point<2>> path;
  double eps() const { return std::min(eps_cc, eps_lc); }
};

struct ConditionResult {
  ConditionResult() = default;
  explicit ConditionResult(std::string n) : name(std::move(n)) {}

  std::string name;
  bool pass = true;
  double measured = 0.0;
  std::string witness;
  std::vector<Point<2>> witness_path;
};

struct AssumptionCertificate {
  std::string domain;
  std::string params;
  CertifyConfig cfg;
  double eps_floor = 0.0, K_cap = 0.0, lambda_floor = 0.0;
  ConditionResult lc{std::string("LC")}, cc{std::string("CC")}, qhd{std::string("QHD")}, dc{std::string("DC")};
  double eps_meas = 1.0;
  double K_meas = 0.0;
  double lambda_meas = kInf;
  int sampled = 0;
  int skipped = 0;
  int components_touching_gamma = 0;
  std::vector<PairRecord> pairs;

  bool all_pass() const { return lc.pass && cc.pass && qhd.pass && dc.pass; }
};

namespace detail {

inline std::string fmt_point(const Point<2>& p) { return to_string<2>(p); }

inline std::string pair_witness(const PairRecord& r) {
  std::ostringstream s;
  s.precision(6);
  s << "x=" << fmt_point(r.x) << " y=" << fmt_point(r.y) << " |x-y|=" << r.sep;
  return s.str();
}

/// Carrot constant dist(z, Gamma) |x - y| / (|x - z| |y - z|).
inline double carrot(const Domain2& dom, const Point<2>& x, const Point<2>& y, const Point<2>& z) {
  double a = distance<2>(x, z), b = distance<2>(y, z);
  if (a == 0.0 || b == 0.0) return kInf;
  return dom.gamma(z) * distance<2>(x, y) / (a * b);
}

/// Diameter estimate of a point set from extents along 32 directions.
inline double set_diameter(const std::vector<Point<2>>& pts) {
  double d = 0.0;
  for (int k = 0; k < 32; ++k) {
    double c = std::cos(k * kPi / 32), s = std::sin(k * kPi / 32);
    double lo = kInf, hi = -kInf;
    for (const auto& p : pts) {
      double v = c * p[0] + s * p[1];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    d = std::max(d, hi - lo);
  }
  return d;
}

}  // namespace detail

/// Path search and measurement over the intersecting-cube graph of W(cl(Gamma)).
class AssumptionChecker {
 public:
  AssumptionChecker(const Domain2& dom, const CertifyConfig& cfg) : dom_(dom), cfg_(cfg) {
    if (!dom.gamma_empty()) {
      W_ = std::make_shared<WhitneyDecomposition<2>>(decompose(dom.gamma, dom.window, cfg.max_level));
      qh_ = std::make_unique<QhGraph<2>>(dom, W_, cfg.refine);
    }
  }

  const Domain2& domain() const { return dom_; }
  std::shared_ptr<const WhitneyDecomposition<2>> whitney() const { return W_; }

  /// qhdist_Xi(z, Omega); 0 for z in Omega or Gamma empty.
  double qhdist_to_omega(const Point<2>& z) {
    if (!W_ || dom_.inside(z)) return 0.0;
    auto r = qh_->distance_to_set(z, [this](const Point<2>& p) { return dom_.inside(p); });
    return r.value;
  }

  /// The pair is usable when both points lie in resolved cubes (or Gamma is empty).
  bool resolved(const Point<2>& p) const {
    if (!dom_.window.contains(p)) return false;
    if (!W_) return true;
    return W_->containing(p).kind == CubeLookup<2>::Cube;
  }

  PairRecord measure_pair(const Point<2>& x, const Point<2>& y, double eps_floor) {
    PairRecord r;
    r.x = x;
    r.y = y;
    r.sep = distance<2>(x, y);
    if (!W_) {
      r.straight = true;
      r.path = {x, y};
      return r;
    }
    std::optional<PairRecord> seg = straight_segment(x, y);
    search_path(r, eps_floor);
    if (seg && (!r.found || seg->eps() >= r.eps())) {
      seg->K = path_qhd(seg->path, {});
      return *seg;
    }
    return r;
  }

 private:
  /// The segment x-y when it avoids cl(Gamma), found by marching with the
  /// distance to Gamma as step; carrot measured at the marched points.
  std::optional<PairRecord> straight_segment(const Point<2>& x, const Point<2>& y) const {
    PairRecord r;
    r.x = x;
    r.y = y;
    r.sep = distance<2>(x, y);
    r.straight = true;
    double tol = dom_.tol_b();
    double worst = kInf, t = 0.0;
    Point<2> dir = scale<2>(sub<2>(y, x), 1.0 / r.sep);
    for (int step = 0; t < r.sep; ++step) {
      if (step > kMarchSteps) return std::nullopt;
      Point<2> z = add<2>(x, scale<2>(dir, t));
      double d = dom_.gamma(z);
      if (d <= tol) return std::nullopt;
      if (t > 0) worst = std::min(worst, detail::carrot(dom_, x, y, z));
      t += std::min(d, r.sep / 64);
    }
    r.eps_cc = std::min(1.0, worst);
    r.eps_lc = 1.0;
    r.path = {x, y};
    return r;
  }

  /// Widest path on cube centres for the carrot value, then the shortest path
  /// over a ladder of thresholds below it; the best min(eps_cc, eps_lc) wins.
  /// Centre values carry the slack factor 1/2.
  void search_path(PairRecord& r, double eps_floor) {
    const auto& W = *W_;
    int a = W.containing(r.x).index, b = W.containing(r.y).index;
    Point<2> mid = scale<2>(add<2>(r.x, r.y), 0.5);
    double radius = r.sep / (2.0 * eps_floor) + 1e-12;
    std::unordered_map<int, double> val;
    auto value = [&](int j) {
      auto it = val.find(j);
      if (it != val.end()) return it->second;
      Point<2> c = W.cubes[j].center();
      double v = distance<2>(c, mid) <= radius ? detail::carrot(dom_, r.x, r.y, c) : -1.0;
      val.emplace(j, v);
      return v;
    };
    // widest path
    std::unordered_map<int, double> best;
    std::priority_queue<std::pair<double, int>> pq;
    best[a] = value(a);
    pq.push({best[a], a});
    while (!pq.empty()) {
      auto [w, u] = pq.top();
      pq.pop();
      if (w < best[u]) continue;
      if (u == b) break;
      W.for_each_intersecting(u, [&](int v) {
        double vv = value(v);
        if (vv < 0) return;
        double nw = std::min(w, vv);
        auto it = best.find(v);
        if (it == best.end() || nw > it->second) {
          best[v] = nw;
          pq.push({nw, v});
        }
      });
    }
    if (!best.count(b)) {
      r.found = false;
      r.eps_cc = 0.0;
      r.eps_lc = 0.0;
      r.K = 0.0;
      return;
    }
    double top = best[b];
    double best_eps = -1.0;
    for (int i = 0; i < kEpsLadder; ++i) {
      double t = top * std::ldexp(1.0, -i);
      auto path = shortest_path(a, b, t, value);
      if (path.empty()) continue;
      double len = 0.0, cc = kInf;
      std::vector<Point<2>> pts{r.x};
      for (int j : path) pts.push_back(W.cubes[j].center());
      pts.push_back(r.y);
      for (std::size_t k = 1; k < pts.size(); ++k) len += distance<2>(pts[k - 1], pts[k]);
      for (int j : path) cc = std::min(cc, value(j));
      double ecc = std::min(1.0, 0.5 * cc), elc = len > 0 ? std::min(1.0, r.sep / len) : 1.0;
      if (std::min(ecc, elc) > best_eps) {
        best_eps = std::min(ecc, elc);
        r.eps_cc = ecc;
        r.eps_lc = elc;
        r.path = pts;
        last_cubes_ = path;
      }
    }
    r.K = path_qhd(r.path, last_cubes_);
  }

  template <class Value>
  std::vector<int> shortest_path(int a, int b, double t, Value& value) const {
    const auto& W = *W_;
    std::unordered_map<int, double> dist;
    std::unordered_map<int, int> prev;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[a] = 0.0;
    pq.push({0.0, a});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      if (u == b) break;
      Point<2> cu = W.cubes[u].center();
      W.for_each_intersecting(u, [&](int v) {
        if (value(v) < t) return;
        double nd = d + distance<2>(cu, W.cubes[v].center());
        auto it = dist.find(v);
        if (it == dist.end() || nd < it->second) {
          dist[v] = nd;
          prev[v] = u;
          pq.push({nd, v});
        }
      });
    }
    if (!dist.count(b)) return {};
    std::vector<int> path{b};
    while (path.back() != a) path.push_back(prev.at(path.back()));
    std::reverse(path.begin(), path.end());
    return path;
  }

  /// max qhdist(z, Omega) over path vertices, cached per cube.
  double path_qhd(const std::vector<Point<2>>& pts, const std::vector<int>& cubes) {
    double K = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& z = pts[i];
      if (dom_.inside(z)) continue;
      bool is_centre = i > 0 && i + 1 < pts.size() && i - 1 < cubes.size();
      if (is_centre) {
        int q = cubes[i - 1];
        auto it = qhd_cache_.find(q);
        if (it == qhd_cache_.end()) it = qhd_cache_.emplace(q, qhdist_to_omega(z)).first;
        K = std::max(K, it->second);
      } else if (resolved(z)) {
        K = std::max(K, qhdist_to_omega(z));
      }
    }
    return K;
  }

  Domain2 dom_;
  CertifyConfig cfg_;
  std::shared_ptr<WhitneyDecomposition<2>> W_;
  std::unique_ptr<QhGraph<2>> qh_;
  std::unordered_map<int, double> qhd_cache_;
  std::vector<int> last_cubes_;
};

/// Pairs x, y in Omega with |x - y| < delta: half uniform over the inner half
/// of the window with log-uniform separations, half in balls around Gamma
/// points whose distance to D is comparable to the ball radius.
inline std::vector<std::pair<Point<2>, Point<2>>> sample_pairs(const AssumptionChecker& chk, const CertifyConfig& cfg) {
  const auto& dom = chk.domain();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Box<2> box = dom.window;
  for (int a = 0; a < 2; ++a) {
    double c = 0.5 * (box.lo[a] + box.hi[a]), h = 0.25 * box.extent(a);
    box.lo[a] = c - h;
    box.hi[a] = c + h;
  }
  double hmin = std::ldexp(box.extent(0), -cfg.max_level + 2);
  std::vector<Point<2>> gpts;
  if (!dom.gamma_empty())
    for (const auto& p : sample_pieces<2>(dom.gamma_pieces, box.extent(0) / 4096))
      if (box.contains(p)) gpts.push_back(p);
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, U(rng)); };
  auto in_omega = [&](const Point<2>& p) { return box.contains(p) && dom.inside(p) && chk.resolved(p); };
  std::vector<std::pair<Point<2>, Point<2>>> out;
  bool junctions = !gpts.empty() && !dom.d_empty();
  std::vector<double> gd;
  for (const auto& p : gpts) gd.push_back(junctions ? dom.dset(p) : kInf);
  auto uniform_pair = [&](Point<2>& x, Point<2>& y) {
    x = {box.lo[0] + U(rng) * box.extent(0), box.lo[1] + U(rng) * box.extent(1)};
    double r = log_uniform(hmin, cfg.delta), t = 2 * kPi * U(rng);
    y = {x[0] + r * std::cos(t), x[1] + r * std::sin(t)};
  };
  auto junction_pair = [&](Point<2>& x, Point<2>& y) {
    double s = log_uniform(hmin, cfg.delta / 2);
    std::vector<std::size_t> near;
    for (std::size_t i = 0; i < gpts.size(); ++i)
      if (gd[i] <= 4 * s) near.push_back(i);
    const Point<2>& c = near.empty() ? gpts[std::size_t(U(rng) * gpts.size()) % gpts.size()]
                                     : gpts[near[std::size_t(U(rng) * near.size()) % near.size()]];
    auto draw = [&]() {
      double rr = s * std::sqrt(U(rng)), t = 2 * kPi * U(rng);
      return Point<2>{c[0] + rr * std::cos(t), c[1] + rr * std::sin(t)};
    };
    x = draw();
    y = draw();
  };
  // one stream, one kind decision per attempt: the first n pairs do not depend on cfg.pairs
  long attempts = 0;
  const long max_attempts = 400L * cfg.pairs;
  while (int(out.size()) < cfg.pairs && attempts++ < max_attempts) {
    Point<2> x, y;
    if (junctions && U(rng) < cfg.junction_share)
      junction_pair(x, y);
    else
      uniform_pair(x, y);
    double d = distance<2>(x, y);
    if (d > 0 && d < cfg.delta && in_omega(x) && in_omega(y)) out.push_back({x, y});
  }
  return out;
}

/// (DC): components of Omega on a cell-centred lattice of the window
/// (4-connectivity); those with a cell within one cell diagonal of Gamma
/// must have diameter >= lambda delta.
inline void check_diameter_condition(const Domain2& dom, const CertifyConfig& cfg, AssumptionCertificate& cert) {
  const int n = cfg.dc_grid;
  const Box<2>& w = dom.window;
  double hx = w.extent(0) / n, hy = w.extent(1) / n, diag = std::hypot(hx, hy);
  auto node = [&](int i, int j) { return Point<2>{w.lo[0] + (i + 0.5) * hx, w.lo[1] + (j + 0.5) * hy}; };
  std::vector<int> label(std::size_t(n) * n, -1);
  int comps = 0;
  double lam = kInf;
  for (int s = 0; s < n * n; ++s) {
    if (label[s] >= 0 || !dom.inside(node(s % n, s / n))) continue;
    std::vector<int> stack{s}, cells;
    label[s] = comps;
    bool touches = false;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      cells.push_back(c);
      int i = c % n, j = c / n;
      if (!dom.gamma_empty() && dom.gamma(node(i, j)) <= diag) touches = true;
      const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        int a = i + di[k], b = j + dj[k];
        if (a < 0 || b < 0 || a >= n || b >= n) continue;
        int id = b * n + a;
        if (label[id] >= 0 || !dom.inside(node(a, b))) continue;
        label[id] = comps;
        stack.push_back(id);
      }
    }
    if (touches) {
      ++cert.components_touching_gamma;
      std::vector<Point<2>> pts;
      for (int c : cells) pts.push_back(node(c % n, c / n));
      double d = detail::set_diameter(pts) + diag;
      double l = d / cfg.delta;
      if (l < lam) {
        lam = l;
        cert.dc.witness = "component containing " + to_string<2>(pts.front()) +
                          " diam=" + std::to_string(d);
      }
    }
    ++comps;
  }
  cert.lambda_meas = lam;
  cert.dc.measured = lam;
  cert.dc.pass = lam >= cert.lambda_floor;
  if (cert.dc.pass) cert.dc.witness.clear();
}

inline AssumptionCertificate check_assumption(const Domain2& dom, const CertifyConfig& cfg) {
  AssumptionCertificate cert;
  cert.domain = dom.name;
  cert.params = dom.params;
  cert.cfg = cfg;
  const auto& cl = dom.claimed;
  cert.eps_floor = cfg.eps_floor > 0 ? cfg.eps_floor : (cl && cl->eps > 0 ? cl->eps : kDefaultEpsFloor);
  cert.K_cap = cfg.K_cap > 0 ? cfg.K_cap : (cl && cl->K > 0 ? cl->K + 0.5 : kDefaultKCap);
  cert.lambda_floor =
      cfg.lambda_floor > 0 ? cfg.lambda_floor : (cl && cl->lambda > 0 ? cl->lambda : kDefaultLambdaFloor);
  AssumptionChecker chk(dom, cfg);
  auto pairs = sample_pairs(chk, cfg);
  cert.skipped = cfg.pairs - int(pairs.size());
  double worst_lc = kInf, worst_cc = kInf, worst_k = -1.0;
  for (const auto& [x, y] : pairs) {
    auto r = chk.measure_pair(x, y, cert.eps_floor);
    ++cert.sampled;
    if (r.eps_lc < worst_lc) {
      worst_lc = r.eps_lc;
      cert.lc.witness = detail::pair_witness(r) + (r.found ? "" : " (no path in the search ball)");
      cert.lc.witness_path = r.path;
    }
    if (r.eps_cc < worst_cc) {
      worst_cc = r.eps_cc;
      cert.cc.witness = detail::pair_witness(r) + (r.found ? "" : " (no path in the search ball)");
      cert.cc.witness_path = r.path;
    }
    if (r.K > worst_k) {
      worst_k = r.K;
      cert.qhd.witness = detail::pair_witness(r);
      cert.qhd.witness_path = r.path;
    }
    cert.pairs.push_back(std::move(r));
  }
  if (pairs.empty()) worst_lc = worst_cc = 1.0, worst_k = 0.0;
  cert.lc.measured = worst_lc;
  cert.cc.measured = worst_cc;
  cert.qhd.measured = std::max(0.0, worst_k);
  cert.lc.pass = worst_lc >= cert.eps_floor;
  cert.cc.pass = worst_cc >= cert.eps_floor;
  cert.qhd.pass = cert.qhd.measured <= cert.K_cap;
  for (auto* c : {&cert.lc, &cert.cc, &cert.qhd})
    if (c->pass) {
      c->witness.clear();
      c->witness_path.clear();
    }
  cert.eps_meas = std::min(worst_lc, worst_cc);
  cert.K_meas = cert.qhd.measured;
  check_diameter_condition(dom, cfg, cert);
  return cert;
}

/// Key-value rendering of a certificate.
inline std::string format_certificate(const AssumptionCertificate& c) {
  std::ostringstream s;
  s.precision(6);
  s << "notice: " << kCertifyNotice << "\n";
  s << "domain: " << c.domain << " " << c.params << "\n";
  s << "delta: " << c.cfg.delta << "\npairs: " << c.sampled << "\nskipped: " << c.skipped << "\nseed: " << c.cfg.seed
    << "\nmax_level: " << c.cfg.max_level << "\n";
  s << "eps_floor: " << c.eps_floor << "\nK_cap: " << c.K_cap << "\nlambda_floor: " << c.lambda_floor << "\n";
  s << "eps_meas: " << c.eps_meas << "\nK_meas: " << c.K_meas << "\nlambda_meas: " << c.lambda_meas << "\n";
  s << "cc_slack: centre values times 1/2\n";
  for (const auto* r : {&c.lc, &c.cc, &c.qhd, &c.dc}) {
    s << r->name << ": " << (r->pass ? "pass" : "FAIL") << " measured=" << r->measured;
    if (!r->pass) s << " witness: " << r->witness;
    s << "\n";
  }
  s << "components_touching_gamma: " << c.components_touching_gamma << "\n";
  s << "all_pass: " << (c.all_pass() ? "yes" : "no") << "\n";
  return s.str();
}

/// (QHD) probes: K_meas = max qhdist_Xi(z, Omega) over the given points.
struct QhdProbeReport {
  std::vector<std::pair<Point<2>, double>> rows;
  double K_meas = 0.0;
  int skipped = 0;
};

inline QhdProbeReport qhd_probe(AssumptionChecker& chk, const std::vector<Point<2>>& probes) {
  QhdProbeReport rep;
  for (const auto& z : probes) {
    if (!chk.resolved(z)) {
      ++rep.skipped;
      continue;
    }
    double k = chk.qhdist_to_omega(z);
    rep.rows.push_back({z, k});
    rep.K_meas = std::max(rep.K_meas, k);
  }
  return rep;
}

/// Upper-quadrant probes z = (v, w), w > 0, 0 <= v <= w / tan(theta), with w
/// log-uniform in [w0, w1].
inline std::vector<Point<2>> sector_probes(double theta, int count, std::uint64_t seed, double w0 = 1.0 / 16,
                                           double w1 = 2.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Point<2>> out;
  for (int i = 0; i < count; ++i) {
    double w = w0 * std::pow(w1 / w0, U(rng));
    double v = U(rng) * w / std::tan(theta);
    out.push_back({v, w});
  }
  return out;
}

}  // namespace sobext
