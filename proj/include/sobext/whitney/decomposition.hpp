#pragma once

// Truncated Whitney decomposition of the complement of a closed set F inside
// a dyadic-aligned window.

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "../core/error.hpp"
#include "../geometry/oracles.hpp"
#include "dyadic_cube.hpp"

namespace sobext {

template <int D>
struct CubeLookup {
  enum Kind { Cube, None, Unresolved } kind = None;
  int index = -1;  // into cubes or unresolved
};

template <int D>
class WhitneyDecomposition {
 public:
  using Cube = DyadicCube<D>;

  SetOracle<D> target;
  Box<D> window;
  int max_level = 12;
  int root_level = 0;
  std::vector<Cube> cubes;
  std::vector<Cube> unresolved;
  /// Measure of window cells certified to lie inside F (dropped, not subdivided).
  double inside_measure = 0.0;

  int size() const { return int(cubes.size()); }

  double unresolved_measure() const {
    double m = 0.0;
    for (const auto& u : unresolved) m += u.measure();
    return m;
  }

  double cube_measure() const {
    double m = 0.0;
    for (const auto& q : cubes) m += q.measure();
    return m;
  }

  /// Index of q among cubes, or -1.
  int find(const Cube& q) const {
    auto it = index_.find(q);
    if (it == index_.end() || it->second < 0) return -1;
    return it->second;
  }

  bool is_unresolved(const Cube& q) const {
    auto it = index_.find(q);
    return it != index_.end() && it->second < 0;
  }

  /// The stored cell containing p, using half-open cells (a, a + 1] so that
  /// ties on shared faces go to the smaller anchor.
  CubeLookup<D> containing(const Point<D>& p) const {
    if (!window.contains(p) || target(p) == 0.0) return {};
    for (int l = root_level; l <= max_level; ++l) {
      Cube c = cell_at(p, l);
      auto it = index_.find(c);
      if (it == index_.end()) continue;
      if (it->second >= 0) return {CubeLookup<D>::Cube, it->second};
      return {CubeLookup<D>::Unresolved, -it->second - 1};
    }
    return {};
  }

  /// Indices of the cubes intersecting cubes[i] (excluding i).
  std::vector<int> intersecting(int i) const {
    return {adj_.begin() + adj_off_[i], adj_.begin() + adj_off_[i + 1]};
  }

  int intersecting_count(int i) const { return adj_off_[i + 1] - adj_off_[i]; }

  template <class Fn>
  void for_each_intersecting(int i, Fn&& fn) const {
    for (int k = adj_off_[i]; k < adj_off_[i + 1]; ++k) fn(adj_[k]);
  }

  std::vector<int> touching(int i) const {
    std::vector<int> out;
    for_each_intersecting(i, [&](int j) {
      if (cubes_touch(cubes[i], cubes[j])) out.push_back(j);
    });
    return out;
  }

  /// Intersecting stored cubes of any level in [level(q) - coarse, level(q) + fine].
  std::vector<int> probe_neighbors(const Cube& q, int coarse, int fine) const {
    std::vector<int> out;
    int lmin = std::max(root_level, q.level - coarse), lmax = std::min(max_level, q.level + fine);
    for (int l = lmin; l <= lmax; ++l) {
      std::array<std::int64_t, D> lo, hi;
      for (int a = 0; a < D; ++a) {
        if (l <= q.level) {
          int s = q.level - l;
          lo[a] = ((q.anchor[a] + (std::int64_t(1) << s) - 1) >> s) - 1;  // ceil(a / 2^s) - 1
          hi[a] = (q.anchor[a] + 1) >> s;
        } else {
          int s = l - q.level;
          lo[a] = (q.anchor[a] << s) - 1;
          hi[a] = (q.anchor[a] + 1) << s;
        }
      }
      Cube c{l, lo};
      while (true) {
        bool boundary_cell = l <= q.level;
        for (int a = 0; a < D && !boundary_cell; ++a)
          boundary_cell = c.anchor[a] == lo[a] || c.anchor[a] == hi[a];
        if (boundary_cell && !(c == q)) {
          int j = find(c);
          if (j >= 0 && cubes_intersect(q, c)) out.push_back(j);
        }
        int a = 0;
        while (a < D && ++c.anchor[a] > hi[a]) c.anchor[a] = lo[a], ++a;
        if (a == D) break;
      }
    }
    return out;
  }

  /// Build the index and the adjacency lists; called by decompose().
  void finalize() {
    std::sort(cubes.begin(), cubes.end());
    std::sort(unresolved.begin(), unresolved.end());
    index_.clear();
    index_.reserve(cubes.size() + unresolved.size());
    for (int i = 0; i < size(); ++i) index_.emplace(cubes[i], i);
    for (int i = 0; i < int(unresolved.size()); ++i) index_.emplace(unresolved[i], -i - 1);
    adj_off_.assign(cubes.size() + 1, 0);
    adj_.clear();
    for (int i = 0; i < size(); ++i) {
      auto nb = probe_neighbors(cubes[i], max_level, 2);
      std::sort(nb.begin(), nb.end());
      adj_.insert(adj_.end(), nb.begin(), nb.end());
      adj_off_[i + 1] = int(adj_.size());
    }
  }

  Cube cell_at(const Point<D>& p, int l) const {
    Cube c{l, {}};
    double s = std::ldexp(1.0, l);
    for (int a = 0; a < D; ++a) {
      auto k = std::int64_t(std::ceil(p[a] * s)) - 1;
      auto lo = std::int64_t(std::llround(window.lo[a] * s));
      c.anchor[a] = std::max(k, lo);
    }
    return c;
  }

 private:
  std::unordered_map<Cube, int, DyadicCubeHash<D>> index_;
  std::vector<int> adj_off_{0};
  std::vector<int> adj_;
};

/// Coarsest level at which the window is a union of dyadic cells, or throws.
template <int D>
int window_root_level(const Box<D>& window, int max_level) {
  for (int l = -40; l <= max_level; ++l) {
    double s = std::ldexp(1.0, l);
    bool ok = true;
    for (int a = 0; a < D && ok; ++a) {
      double lo = window.lo[a] * s, hi = window.hi[a] * s;
      ok = lo == std::floor(lo) && hi == std::floor(hi) && hi > lo;
    }
    if (ok) return l;
  }
  throw Error(ErrorKind::WindowTooCoarse,
              "window is not a union of dyadic cells at level " + std::to_string(max_level));
}

/// Standard maximal-dyadic construction: subdivide until the certified lower
/// bound on dist(Q, F) reaches diam(Q); cells still failing at max_level are
/// recorded as unresolved.
template <int D>
WhitneyDecomposition<D> decompose(const SetOracle<D>& F, const Box<D>& window, int max_level = 12) {
  WhitneyDecomposition<D> W;
  W.target = F;
  W.window = window;
  W.max_level = max_level;
  W.root_level = window_root_level(window, max_level);
  std::vector<DyadicCube<D>> stack;
  {
    double s = std::ldexp(1.0, W.root_level);
    std::array<std::int64_t, D> lo, hi;
    for (int a = 0; a < D; ++a) {
      lo[a] = std::llround(window.lo[a] * s);
      hi[a] = std::llround(window.hi[a] * s) - 1;
    }
    DyadicCube<D> c{W.root_level, lo};
    while (true) {
      stack.push_back(c);
      int a = 0;
      while (a < D && ++c.anchor[a] > hi[a]) c.anchor[a] = lo[a], ++a;
      if (a == D) break;
    }
    std::reverse(stack.begin(), stack.end());
  }
  while (!stack.empty()) {
    DyadicCube<D> q = stack.back();
    stack.pop_back();
    Box<D> b = q.box();
    if (F.box_inside(b)) {
      W.inside_measure += b.measure();
      continue;
    }
    if (F.box_bounds(b).lower >= q.diam()) {
      W.cubes.push_back(q);
    } else if (q.level >= max_level) {
      W.unresolved.push_back(q);
    } else {
      for (int m = (1 << D) - 1; m >= 0; --m) stack.push_back(q.child(m));
    }
  }
  W.finalize();
  return W;
}

/// Counts from the exhaustive check of the Whitney properties.
struct WhitneyCheck {
  long cubes = 0;
  long lower_violations = 0;     // diam(Q) <= dist(Q, F)
  long upper_violations = 0;     // dist(Q, F) <= 4 diam(Q)
  long upper_exempt_roots = 0;   // root cubes: no parent, so the upper bound is not implied
  long ratio_violations = 0;     // intersecting pairs outside [1/4, 4]
  long count_violations = 0;     // more than 12^d intersecting cubes
  long nesting_violations = 0;   // a stored cube contains another stored cube
  int max_intersecting = 0;
  double measure_defect = 0.0;   // relative |window| - (cubes + unresolved + inside)

  long violations() const {
    return lower_violations + upper_violations + ratio_violations + count_violations + nesting_violations;
  }
};

template <int D>
WhitneyCheck check_whitney(const WhitneyDecomposition<D>& W) {
  WhitneyCheck r;
  r.cubes = W.size();
  int cap = 1;
  for (int a = 0; a < D; ++a) cap *= 12;
  for (int i = 0; i < W.size(); ++i) {
    const auto& q = W.cubes[i];
    Interval iv = W.target.box_bounds(q.box());
    double d = q.diam();
    if (iv.lower < d) ++r.lower_violations;
    if (iv.upper > 4.0 * d) {
      if (q.level == W.root_level) ++r.upper_exempt_roots;
      else ++r.upper_violations;
    }
    // Finer neighbours are probed from the finer cube, which sees all coarser levels.
    for (int j : W.probe_neighbors(q, W.max_level, 0)) {
      int dl = q.level - W.cubes[j].level;
      if (dl > 2) ++r.ratio_violations;
    }
    int n = W.intersecting_count(i);
    r.max_intersecting = std::max(r.max_intersecting, n);
    if (n > cap) ++r.count_violations;
    for (auto p = q; p.level > W.root_level;) {
      p = p.parent();
      if (W.find(p) >= 0 || W.is_unresolved(p)) {
        ++r.nesting_violations;
        break;
      }
    }
  }
  double total = W.window.measure();
  r.measure_defect = std::abs(total - (W.cube_measure() + W.unresolved_measure() + W.inside_measure)) / total;
  return r;
}

}  // namespace sobext
