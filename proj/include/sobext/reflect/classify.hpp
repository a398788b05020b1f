#pragma once

// Interior/exterior cube classification and the reflection map Q -> Q*.

#include <algorithm>
#include <memory>
#include <unordered_map>
#include <vector>

#include "../geometry/domain.hpp"
#include "../whitney/decomposition.hpp"

namespace sobext {

enum class ParamMode { Empirical, Strict };

inline const char* to_string(ParamMode m) { return m == ParamMode::Strict ? "strict" : "empirical"; }

struct ReflectParams {
  double A = 1.0 / 16;
  double B = 8.0;
  ParamMode mode = ParamMode::Empirical;

  static ReflectParams strict() { return {1.0 / (16.0 * 90.0), 720.0, ParamMode::Strict}; }
};

/// Checks the proof-side constraints in strict mode (B >= 720, B >= 3 / lambda).
inline void validate(const ReflectParams& p, const std::optional<ClaimedParams>& claimed) {
  if (!(p.A > 0.0) || !(p.B > 2.0)) throw Error(ErrorKind::HypothesisViolated, "need A > 0 and B > 2");
  if (p.mode != ParamMode::Strict) return;
  if (p.B < 720.0) throw Error(ErrorKind::HypothesisViolated, "strict mode needs B >= 720");
  if (claimed && claimed->lambda > 0.0 && p.B < 3.0 / claimed->lambda)
    throw Error(ErrorKind::HypothesisViolated, "strict mode needs B >= 3 / lambda");
}

template <int D>
using WhitneyPtr = std::shared_ptr<const WhitneyDecomposition<D>>;

template <int D>
struct CubeClassification {
  WhitneyPtr<D> ext;  // W(cl(Omega))
  WhitneyPtr<D> gam;  // W(cl(Gamma)); null when Gamma is empty
  ReflectParams params;
  double delta = kInf;
  std::vector<int> we;          // indices into ext, sorted
  std::vector<char> in_we;      // per ext cube
  std::vector<char> in_wi;      // per gam cube
  std::unordered_map<int, int> we_pos;  // ext index -> position in we

  int wi_count() const { return int(std::count(in_wi.begin(), in_wi.end(), 1)); }
};

/// Omega-membership of a box: centre and corners, then the 5x5 lattice of the
/// children; ambiguous boxes count as not meeting Omega.
template <int D>
bool box_meets(const std::function<bool(const Point<D>&)>& inside, const Box<D>& b) {
  if (inside(b.center())) return true;
  for (int m = 0; m < (1 << D); ++m)
    if (inside(b.corner(m))) return true;
  std::array<int, D> k{};
  while (true) {
    Point<D> p;
    for (int a = 0; a < D; ++a) p[a] = b.lo[a] + 0.25 * k[a] * b.extent(a);
    if (inside(p)) return true;
    int a = 0;
    while (a < D && ++k[a] > 4) k[a++] = 0;
    if (a == D) break;
  }
  return false;
}

template <int D>
struct ReflectGeometry {
  Domain<D> dom;
  WhitneyPtr<D> ext;
  WhitneyPtr<D> gam;
};

template <int D>
ReflectGeometry<D> build_geometry(const Domain<D>& dom, int max_level) {
  ReflectGeometry<D> g{dom, nullptr, nullptr};
  g.ext = std::make_shared<WhitneyDecomposition<D>>(decompose(dom.closure, dom.window, max_level));
  if (!dom.gamma_empty())
    g.gam = std::make_shared<WhitneyDecomposition<D>>(decompose(dom.gamma, dom.window, max_level));
  return g;
}

/// We: ext cubes with diam <= A delta and dist(Q, Gamma) < B dist(Q, D), using
/// the certified upper bound on the left and lower bound on the right.
/// Wi: gam cubes meeting Omega.
template <int D>
CubeClassification<D> classify(const ReflectGeometry<D>& geo, const ReflectParams& params) {
  validate(params, geo.dom.claimed);
  const auto& dom = geo.dom;
  CubeClassification<D> c;
  c.ext = geo.ext;
  c.gam = geo.gam;
  c.params = params;
  c.delta = dom.delta();
  c.in_we.assign(c.ext->size(), 0);
  if (!dom.gamma_empty()) {
    for (int i = 0; i < c.ext->size(); ++i) {
      const auto& q = c.ext->cubes[i];
      if (q.diam() > params.A * c.delta) continue;
      Box<D> b = q.box();
      double ug = dom.gamma.box_bounds(b).upper;
      double ld = dom.dset.box_bounds(b).lower;
      if (ug < params.B * ld) {
        c.in_we[i] = 1;
        c.we_pos[i] = int(c.we.size());
        c.we.push_back(i);
      }
    }
  }
  if (c.gam) {
    c.in_wi.assign(c.gam->size(), 0);
    for (int i = 0; i < c.gam->size(); ++i) c.in_wi[i] = box_meets<D>(dom.inside, c.gam->cubes[i].box());
  }
  return c;
}

enum class ReflectStatus { Ok, NoReflection, NoReflectionWindowed };

inline const char* to_string(ReflectStatus s) {
  switch (s) {
    case ReflectStatus::Ok: return "ok";
    case ReflectStatus::NoReflection: return "NoReflection";
    case ReflectStatus::NoReflectionWindowed: return "NoReflection-Windowed";
  }
  return "?";
}

struct ReflectionPair {
  int q = -1;     // ext index
  int star = -1;  // gam index
  ReflectStatus status = ReflectStatus::NoReflection;
  double diam_ratio = 0.0;  // diam(Q*) / diam(Q)
  double dist_ratio = 0.0;  // dist(Q*, Q) / diam(Q)
  double c_search = 0.0;
};

inline constexpr double kSearchFactors[] = {8, 16, 32, 64, 128};

/// Among Wi cubes R with diam(R) >= diam(Q) and dist(R, Q) <= C diam(Q), the
/// one with minimal distance, then larger diameter, then smaller anchor; C
/// runs through 8, 16, 32, 64, 128.
template <int D>
ReflectionPair reflect_cube(const CubeClassification<D>& c, int q) {
  const auto& Q = c.ext->cubes[q];
  ReflectionPair r;
  r.q = q;
  if (!c.gam) return r;
  const auto& G = *c.gam;
  Box<D> qb = Q.box();
  double dq = Q.diam();
  for (double C : kSearchFactors) {
    Box<D> e = qb.expanded(C * dq);
    int best = -1;
    double best_d = kInf;
    for (int l = G.root_level; l <= std::min(Q.level, G.max_level); ++l) {
      double s = std::ldexp(1.0, l);
      std::array<std::int64_t, D> lo, hi;
      for (int a = 0; a < D; ++a) {
        std::int64_t wlo = std::llround(G.window.lo[a] * s), whi = std::llround(G.window.hi[a] * s) - 1;
        lo[a] = std::max(wlo, std::int64_t(std::floor(e.lo[a] * s)));
        hi[a] = std::min(whi, std::int64_t(std::ceil(e.hi[a] * s)) - 1);
      }
      bool empty = false;
      for (int a = 0; a < D; ++a) empty = empty || lo[a] > hi[a];
      if (empty) continue;
      DyadicCube<D> cell{l, lo};
      while (true) {
        int j = G.find(cell);
        if (j >= 0 && c.in_wi[j]) {
          double d = box_box_distance<D>(cell.box(), qb);
          if (d <= C * dq) {
            bool better = best < 0 || d < best_d ||
                          (d == best_d && (G.cubes[j].level < G.cubes[best].level ||
                                           (G.cubes[j].level == G.cubes[best].level &&
                                            G.cubes[j].anchor < G.cubes[best].anchor)));
            if (better) best = j, best_d = d;
          }
        }
        int a = 0;
        while (a < D && ++cell.anchor[a] > hi[a]) cell.anchor[a] = lo[a], ++a;
        if (a == D) break;
      }
    }
    if (best >= 0) {
      r.star = best;
      r.status = ReflectStatus::Ok;
      r.diam_ratio = G.cubes[best].diam() / dq;
      r.dist_ratio = best_d / dq;
      r.c_search = C;
      return r;
    }
  }
  Box<D> e = qb.expanded(kSearchFactors[4] * dq);
  r.status = c.ext->window.contains(e) ? ReflectStatus::NoReflection : ReflectStatus::NoReflectionWindowed;
  return r;
}

template <int D>
struct ReflectionMap {
  std::vector<ReflectionPair> pairs;  // aligned with classification.we

  const ReflectionPair& of(const CubeClassification<D>& c, int ext_index) const {
    return pairs[c.we_pos.at(ext_index)];
  }
};

template <int D>
ReflectionMap<D> reflect_all(const CubeClassification<D>& c) {
  ReflectionMap<D> m;
  m.pairs.reserve(c.we.size());
  for (int q : c.we) m.pairs.push_back(reflect_cube(c, q));
  return m;
}

}  // namespace sobext
