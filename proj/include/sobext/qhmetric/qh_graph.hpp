#pragma once

// Quasihyperbolic distance in Xi = R^d minus cl(Gamma) as shortest paths in a
// lazily expanded graph over W(cl(Gamma)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <unordered_map>
#include <vector>

#include "../core/quadrature.hpp"
#include "../geometry/domain.hpp"
#include "chains.hpp"

namespace sobext {

struct QhResult {
  double value = 0.0;
  /// No path inside the window; a path leaving the window may still exist.
  bool windowed = false;
  int refine = 0;
  int expanded = 0;
  Point<2> reached{};  // for distance_to_set: the node that was reached
};

/// Graph nodes: cube centres plus a boundary lattice of spacing side / 2^refine
/// per cube, and injected query points. Edges join all nodes of a common cube,
/// the centres of intersecting cubes, and injected points to the nodes of their
/// containing cube. Weights are quadratures of 1 / dist(., cl(Gamma)).
template <int D>
class QhGraph {
 public:
  using Cube = DyadicCube<D>;

  QhGraph(const Domain<D>& dom, int max_level, int refine) : dom_(dom), refine_(refine) {
    if (refine < 0 || refine > 3) throw Error(ErrorKind::Usage, "refine must be in [0, 3]");
    if (!dom.gamma_empty()) {
      W_ = std::make_shared<WhitneyDecomposition<D>>(decompose(dom.gamma, dom.window, max_level));
      scale_level_ = max_level + std::max(refine, 1);
      cube_nodes_.resize(W_->size());
    }
  }

  QhGraph(const Domain<D>& dom, std::shared_ptr<const WhitneyDecomposition<D>> W, int refine)
      : dom_(dom), refine_(refine), W_(std::move(W)) {
    if (W_) {
      scale_level_ = W_->max_level + std::max(refine, 1);
      cube_nodes_.resize(W_->size());
    }
  }

  int refine() const { return refine_; }
  bool trivial() const { return !W_; }
  const WhitneyDecomposition<D>& whitney() const { return *W_; }
  std::shared_ptr<const WhitneyDecomposition<D>> whitney_ptr() const { return W_; }
  std::size_t node_count() const { return pos_.size(); }

  /// Node for a query point; throws PointOnGamma or Unresolved.
  int inject(const Point<D>& p) {
    if (dom_.gamma(p) <= dom_.tol_b()) throw Error(ErrorKind::PointOnGamma, to_string<D>(p));
    auto look = W_->containing(p);
    if (look.kind == CubeLookup<D>::Unresolved) throw Error(ErrorKind::Unresolved, to_string<D>(p));
    if (look.kind == CubeLookup<D>::None)
      throw Error(ErrorKind::Usage, "point outside the window or not in Xi: " + to_string<D>(p));
    std::uint64_t key = point_bits(p);
    if (auto it = injected_.find(key); it != injected_.end()) return it->second;
    int id = new_node(p, look.index);
    injected_.emplace(key, id);
    injected_in_cube_[look.index].push_back(id);
    return id;
  }

  QhResult distance(const Point<D>& x, const Point<D>& y) {
    if (trivial()) return {0.0, false, refine_, 0, {}};
    int s = inject(x), t = inject(y);
    return distance(s, t);
  }

  /// A* with the lower bound log(1 + |v - t| / min(d(v), d(t))).
  QhResult distance(int s, int t) {
    if (trivial()) return {0.0, false, refine_, 0, {}};
    const Point<D> target = pos_[t];
    const double dt = dom_.gamma(target);
    auto h = [&](int v) {
      return std::log1p(sobext::distance<D>(pos_[v], target) / std::min(gamma_dist(v), dt));
    };
    return search(s, [t](int v) { return v == t; }, h);
  }

  /// Distance from x to the nearest node satisfying pred (e.g. a node inside Omega).
  QhResult distance_to_set(const Point<D>& x, const std::function<bool(const Point<D>&)>& pred) {
    if (trivial()) return {0.0, false, refine_, 0, {}};
    int s = inject(x);
    auto r = search(s, [&](int v) { return pred(pos_[v]); }, [](int) { return 0.0; });
    return r;
  }

  /// Minimum intersecting chain between the cubes containing x and y.
  std::optional<ChainResult> intersecting_chain(const Point<D>& x, const Point<D>& y, int max_len) const {
    int a = containing_cube(x), b = containing_cube(y);
    return bfs_chain<D>(*W_, a, b, ChainKind::Intersecting, max_len);
  }

  int containing_cube(const Point<D>& p) const {
    auto look = W_->containing(p);
    if (look.kind == CubeLookup<D>::Unresolved) throw Error(ErrorKind::Unresolved, to_string<D>(p));
    if (look.kind == CubeLookup<D>::None) throw Error(ErrorKind::PointOnGamma, to_string<D>(p));
    return look.index;
  }

  /// Quasihyperbolic length of the straight segment a -> b with weight floor.
  double segment_weight(const Point<D>& a, const Point<D>& b, double floor) const {
    const Point<D>* p = &a;
    const Point<D>* q = &b;
    if (b < a) std::swap(p, q);
    Point<D> dir = sub<D>(*q, *p);
    double len = norm<D>(dir);
    if (len == 0.0) return 0.0;
    Point<D> pa = *p;
    auto f = [&](double t) {
      return 1.0 / std::max(dom_.gamma(add<D>(pa, scale<D>(dir, t))), floor);
    };
    return len * adaptive_simpson(f, 0.0, 1.0, 1e-6, 30);
  }

 private:
  struct Entry {
    double f;
    double g;
    int v;
    bool operator>(const Entry& o) const { return f > o.f || (f == o.f && v > o.v); }
  };

  template <class IsTarget, class Heuristic>
  QhResult search(int s, IsTarget&& is_target, Heuristic&& h) {
    std::unordered_map<int, double> best;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;
    pq.push({h(s), 0.0, s});
    best[s] = 0.0;
    QhResult r;
    r.refine = refine_;
    while (!pq.empty()) {
      Entry e = pq.top();
      pq.pop();
      if (e.g > best[e.v]) continue;
      ++r.expanded;
      if (is_target(e.v)) {
        r.value = e.g;
        for (int i = 0; i < D && i < 2; ++i) r.reached[i] = pos_[e.v][i];
        return r;
      }
      for_each_edge(e.v, [&](int w, double wt) {
        double g = e.g + wt;
        auto it = best.find(w);
        if (it == best.end() || g < it->second) {
          best[w] = g;
          pq.push({g + h(w), g, w});
        }
      });
    }
    r.value = kInf;
    r.windowed = true;
    return r;
  }

  double gamma_dist(int v) {
    if (gdist_[v] < 0.0) gdist_[v] = dom_.gamma(pos_[v]);
    return gdist_[v];
  }

  template <class Fn>
  void for_each_edge(int u, Fn&& fn) {
    auto visit_cube = [&](int q, bool include_center_links) {
      const auto& nodes = nodes_of(q);
      double fl = 0.5 * W_->cubes[q].side();
      for (int v : nodes)
        if (v != u) fn(v, weight(u, v, fl));
      if (auto it = injected_in_cube_.find(q); it != injected_in_cube_.end())
        for (int v : it->second)
          if (v != u) fn(v, weight(u, v, fl));
      if (include_center_links) {
        W_->for_each_intersecting(q, [&](int j) {
          int c = nodes_of(j).front();
          double fl2 = 0.5 * std::min(W_->cubes[q].side(), W_->cubes[j].side());
          fn(c, weight(u, c, fl2));
        });
      }
    };
    if (owner_cube_[u] >= 0) {
      visit_cube(owner_cube_[u], false);
      return;
    }
    for (int q : owners(u)) visit_cube(q, nodes_of(q).front() == u);
  }

  double weight(int u, int v, double floor) {
    std::uint64_t key = u < v ? (std::uint64_t(u) << 32 | std::uint32_t(v)) : (std::uint64_t(v) << 32 | std::uint32_t(u));
    auto it = wcache_.find(key);
    if (it != wcache_.end()) return it->second;
    double w = segment_weight(pos_[u], pos_[v], floor);
    wcache_.emplace(key, w);
    return w;
  }

  /// Node ids of cube q: centre first, then the boundary lattice.
  const std::vector<int>& nodes_of(int q) {
    auto& list = cube_nodes_[q];
    if (!list.empty()) return list;
    const Cube& c = W_->cubes[q];
    int L = scale_level_;
    std::array<std::int64_t, D> lo, ctr;
    std::int64_t span = std::int64_t(1) << (L - c.level);
    for (int a = 0; a < D; ++a) {
      lo[a] = c.lo_at(a, L);
      ctr[a] = lo[a] + span / 2;
    }
    list.push_back(lattice_node(ctr));
    if (refine_ == 0) return list;
    int n = 1 << refine_;
    std::int64_t step = span / n;
    std::array<int, D> k{};
    while (true) {
      bool on_boundary = false;
      for (int a = 0; a < D; ++a) on_boundary = on_boundary || k[a] == 0 || k[a] == n;
      if (on_boundary) {
        std::array<std::int64_t, D> key;
        for (int a = 0; a < D; ++a) key[a] = lo[a] + k[a] * step;
        list.push_back(lattice_node(key));
      }
      int a = 0;
      while (a < D && ++k[a] > n) k[a++] = 0;
      if (a == D) break;
    }
    return list;
  }

  /// Cubes containing the lattice node u (closed cubes).
  std::vector<int> owners(int u) {
    std::vector<int> out;
    const auto& key = keys_[u];
    for (int mask = 0; mask < (1 << D); ++mask) {
      for (int l = W_->root_level; l <= W_->max_level; ++l) {
        Cube c{l, {}};
        int s = scale_level_ - l;
        for (int a = 0; a < D; ++a) c.anchor[a] = ((mask >> a) & 1) ? (key[a] >> s) : ((key[a] - 1) >> s);
        int j = W_->find(c);
        if (j >= 0) {
          if (std::find(out.begin(), out.end(), j) == out.end()) out.push_back(j);
          break;
        }
        if (W_->is_unresolved(c)) break;
      }
    }
    return out;
  }

  int lattice_node(const std::array<std::int64_t, D>& key) {
    auto it = lattice_.find(key);
    if (it != lattice_.end()) return it->second;
    Point<D> p;
    for (int a = 0; a < D; ++a) p[a] = std::ldexp(double(key[a]), -scale_level_);
    int id = new_node(p, -1);
    keys_[id] = key;
    lattice_.emplace(key, id);
    return id;
  }

  int new_node(const Point<D>& p, int owner) {
    pos_.push_back(p);
    owner_cube_.push_back(owner);
    keys_.push_back({});
    gdist_.push_back(-1.0);
    return int(pos_.size()) - 1;
  }

  static std::uint64_t point_bits(const Point<D>& p) {
    std::uint64_t h = 1469598103934665603ull;
    for (double x : p) {
      std::uint64_t b;
      std::memcpy(&b, &x, sizeof b);
      h = (h ^ b) * 1099511628211ull;
    }
    return h;
  }

  struct KeyHash {
    std::size_t operator()(const std::array<std::int64_t, D>& k) const {
      std::uint64_t h = 1469598103934665603ull;
      for (auto v : k) h = (h ^ std::uint64_t(v)) * 1099511628211ull;
      return std::size_t(h);
    }
  };

  Domain<D> dom_;
  int refine_;
  std::shared_ptr<const WhitneyDecomposition<D>> W_;
  int scale_level_ = 0;
  std::vector<Point<D>> pos_;
  std::vector<int> owner_cube_;  // cube of an injected node, -1 for lattice nodes
  std::vector<std::array<std::int64_t, D>> keys_;
  std::vector<double> gdist_;
  std::vector<std::vector<int>> cube_nodes_;
  std::unordered_map<std::array<std::int64_t, D>, int, KeyHash> lattice_;
  std::unordered_map<std::uint64_t, int> injected_;
  std::unordered_map<int, std::vector<int>> injected_in_cube_;
  std::unordered_map<std::uint64_t, double> wcache_;
};

struct QhChainRow {
  Point<2> x{}, y{};
  double qhdist = 0.0;
  int chain = 0;
  int refine = 0;
};

/// Random pairs in Xi with |x - y| <= max_sep and dist(., Gamma) >= min_gamma.
inline std::vector<QhChainRow> chain_qhdist_equivalence_report(QhGraph<2>& G, const Domain<2>& dom,
                                                               int pairs, std::uint64_t seed,
                                                               double max_sep = 1.0, double min_gamma = 1.0 / 16) {
  if (dom.gamma_empty()) throw Error(ErrorKind::HypothesisViolated, "equivalence report needs nonempty Gamma");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(dom.window.lo[0], dom.window.hi[0]), uy(dom.window.lo[1], dom.window.hi[1]);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto& W = G.whitney();
  auto ok = [&](const P2& p) {
    if (!dom.window.contains(p) || dom.gamma(p) < min_gamma) return false;
    return W.containing(p).kind == CubeLookup<2>::Cube;
  };
  std::vector<QhChainRow> rows;
  while (int(rows.size()) < pairs) {
    P2 x{ux(rng), uy(rng)};
    double r = max_sep * u01(rng), a = 2 * kPi * u01(rng);
    P2 y{x[0] + r * std::cos(a), x[1] + r * std::sin(a)};
    if (!ok(x) || !ok(y)) continue;
    QhChainRow row{x, y, 0.0, 0, G.refine()};
    row.qhdist = G.distance(x, y).value;
    auto ch = G.intersecting_chain(x, y, 1 << 20);
    row.chain = ch ? ch->length() : 0;
    rows.push_back(row);
  }
  return rows;
}

/// Running maximum of chain length over qhdist buckets of width `width`.
inline std::vector<int> chain_envelope(const std::vector<QhChainRow>& rows, double width = 0.5) {
  std::vector<int> env;
  for (const auto& r : rows) {
    if (!std::isfinite(r.qhdist)) continue;
    std::size_t b = std::size_t(r.qhdist / width);
    if (env.size() <= b) env.resize(b + 1, 0);
    env[b] = std::max(env[b], r.chain);
  }
  for (std::size_t i = 1; i < env.size(); ++i) env[i] = std::max(env[i], env[i - 1]);
  return env;
}

}  // namespace sobext
