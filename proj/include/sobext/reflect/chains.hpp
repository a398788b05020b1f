#pragma once

// Touching chains between reflected cubes, escape chains toward exterior
// cubes, and the overlap count of the dilated chain regions.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../qhmetric/chains.hpp"
#include "classify.hpp"

namespace sobext {

enum class ChainFamilyKind { FJK, FP };

struct ReflectChain {
  int j = -1;  // ext index of Q_j
  int k = -1;  // ext index of Q_k (FJK) or -1 (FP)
  std::vector<int> cubes;  // gam indices S_1..S_m
};

struct ChainFailure {
  int j = -1;
  int k = -1;
  std::string what;
};

struct ChainFamily {
  ChainFamilyKind kind = ChainFamilyKind::FJK;
  std::vector<ReflectChain> chains;
  std::vector<ChainFailure> failures;
  int max_length = 0;
  double k1 = kInf;  // min diam(S_i) / diam(Q_j)
  double k2 = 0.0;   // max diam(S_i) / diam(Q_j)
  double min_terminal_ratio = kInf;  // FP: |S_m cap Q_j| / diam(Q_j)^d
  long nesting_failures = 0;         // FP: neither S_m within Q_j nor the reverse
  /// FP: the cubes Q of W(cl(Omega)) \ We satisfying the hypothesis.
  std::vector<int> fp_sources;
  /// ext index j -> position of its chain in `chains` (FP only).
  std::unordered_map<int, int> by_j;
};

/// Restricts a chain search to cubes of the decomposition whose diameter lies
/// in [lo * d, hi * d].
template <int D>
std::function<bool(int)> diam_band(const WhitneyDecomposition<D>& G, double d, double lo, double hi) {
  return [&G, d, lo, hi](int v) {
    double r = G.cubes[v].diam() / d;
    return r >= lo * (1 - 1e-12) && r <= hi * (1 + 1e-12);
  };
}

inline constexpr int kMaxChainLength = 64;

template <int D>
void record_chain(ChainFamily& fam, const WhitneyDecomposition<D>& G, const WhitneyDecomposition<D>& E,
                  ReflectChain ch) {
  double dj = E.cubes[ch.j].diam();
  for (int s : ch.cubes) {
    double r = G.cubes[s].diam() / dj;
    fam.k1 = std::min(fam.k1, r);
    fam.k2 = std::max(fam.k2, r);
  }
  fam.max_length = std::max(fam.max_length, int(ch.cubes.size()));
  fam.chains.push_back(std::move(ch));
}

/// Band search first in [1/4, 16] diam(Q_j), then once more in [1/16, 64].
template <int D>
std::optional<ChainResult> banded_chain(const WhitneyDecomposition<D>& G, int from,
                                        const std::function<bool(int)>& is_target, double d, double narrow_lo,
                                        double narrow_hi) {
  auto r = bfs_chain<D>(G, from, is_target, ChainKind::Touching, kMaxChainLength,
                        diam_band<D>(G, d, narrow_lo, narrow_hi));
  if (r) return r;
  return bfs_chain<D>(G, from, is_target, ChainKind::Touching, kMaxChainLength,
                      diam_band<D>(G, d, narrow_lo / 4, narrow_hi * 4));
}

/// F_{j,k} for every intersecting pair of We cubes (including j = k).
template <int D>
ChainFamily build_fjk(const CubeClassification<D>& c, const ReflectionMap<D>& refl) {
  ChainFamily fam;
  fam.kind = ChainFamilyKind::FJK;
  if (!c.gam) return fam;
  const auto& E = *c.ext;
  const auto& G = *c.gam;
  for (std::size_t pj = 0; pj < c.we.size(); ++pj) {
    int j = c.we[pj];
    const auto& rj = refl.pairs[pj];
    if (rj.status != ReflectStatus::Ok) {
      fam.failures.push_back({j, -1, to_string(rj.status)});
      continue;
    }
    record_chain<D>(fam, G, E, {j, j, {rj.star}});
    E.for_each_intersecting(j, [&](int k) {
      if (k < j || !c.in_we[k]) return;
      const auto& rk = refl.of(c, k);
      if (rk.status != ReflectStatus::Ok) return;
      auto r = banded_chain<D>(G, rj.star, [t = rk.star](int v) { return v == t; }, E.cubes[j].diam(), 0.25, 16.0);
      if (!r) {
        fam.failures.push_back({j, k, "NoChain"});
        return;
      }
      record_chain<D>(fam, G, E, {j, k, std::move(r->cubes)});
    });
  }
  return fam;
}

/// F_{P,j}: for Q in W(cl(Omega)) \ We with diam(Q) <= A delta meeting some
/// We cube Q_j, a touching chain from Q_j* to the cube of W(cl(Gamma))
/// containing the centre of Q_j.
template <int D>
ChainFamily build_fp(const CubeClassification<D>& c, const ReflectionMap<D>& refl) {
  ChainFamily fam;
  fam.kind = ChainFamilyKind::FP;
  if (!c.gam) return fam;
  const auto& E = *c.ext;
  const auto& G = *c.gam;
  std::vector<char> wanted(E.size(), 0);
  for (int q = 0; q < E.size(); ++q) {
    if (c.in_we[q] || E.cubes[q].diam() > c.params.A * c.delta) continue;
    bool hit = false;
    E.for_each_intersecting(q, [&](int j) {
      if (c.in_we[j]) wanted[j] = 1, hit = true;
    });
    if (hit) fam.fp_sources.push_back(q);
  }
  for (int j = 0; j < E.size(); ++j) {
    if (!wanted[j]) continue;
    const auto& rj = refl.of(c, j);
    if (rj.status != ReflectStatus::Ok) {
      fam.failures.push_back({j, -1, to_string(rj.status)});
      continue;
    }
    const auto& Qj = E.cubes[j];
    auto look = G.containing(Qj.box().center());
    if (look.kind != CubeLookup<D>::Cube) {
      fam.failures.push_back({j, -1, "NoChain: centre of Q_j not covered"});
      continue;
    }
    int target = look.index;
    auto r = banded_chain<D>(G, rj.star, [target](int v) { return v == target; }, Qj.diam(), 0.125, 64.0);
    if (!r) {
      fam.failures.push_back({j, -1, "NoChain"});
      continue;
    }
    const auto& Sm = G.cubes[target];
    if (!cube_within(Sm, Qj) && !cube_within(Qj, Sm)) ++fam.nesting_failures;
    double meas = std::min(Sm.measure(), Qj.measure());
    fam.min_terminal_ratio = std::min(fam.min_terminal_ratio, meas / std::pow(Qj.diam(), D));
    fam.by_j[j] = int(fam.chains.size());
    record_chain<D>(fam, G, E, {j, -1, std::move(r->cubes)});
  }
  return fam;
}

struct OverlapHistogram {
  int grid_n = 0;
  std::vector<long> counts;  // counts[v] = number of grid nodes covered exactly v times
  int max_overlap = 0;
  int max_overlap_fp = 0;

  int max() const { return std::max(max_overlap, max_overlap_fp); }
};

namespace detail {

/// Marks the grid nodes (cell centres) lying in box b with stamp s and
/// increments their count; each source is counted once per node.
template <int D>
void stamp_box(const Box<D>& win, int n, const Box<D>& b, int s, std::vector<int>& stamp, std::vector<int>& count) {
  std::array<int, D> lo, hi;
  for (int a = 0; a < D; ++a) {
    double h = win.extent(a) / n;
    lo[a] = std::max(0, int(std::ceil((b.lo[a] - win.lo[a]) / h - 0.5)));
    hi[a] = std::min(n - 1, int(std::floor((b.hi[a] - win.lo[a]) / h - 0.5)));
    if (lo[a] > hi[a]) return;
  }
  std::array<int, D> k = lo;
  while (true) {
    std::size_t idx = 0;
    for (int a = D - 1; a >= 0; --a) idx = idx * n + k[a];
    if (stamp[idx] != s) {
      stamp[idx] = s;
      ++count[idx];
    }
    int a = 0;
    while (a < D && ++k[a] > hi[a]) k[a] = lo[a], ++a;
    if (a == D) break;
  }
}

}  // namespace detail

/// Pointwise counts of sum_j chi_{F(Q_j)} with F(Q_j) the union over
/// intersecting Q_k in We of the doubled cubes of F_{j,k}, and likewise of
/// sum_Q chi_{F_P(Q)}, on the cell centres of a gridN^d lattice over the window.
template <int D>
OverlapHistogram overlap_histogram(const CubeClassification<D>& c, const ChainFamily& fjk, const ChainFamily& fp,
                                   int grid_n) {
  OverlapHistogram h;
  h.grid_n = grid_n;
  const auto& win = c.ext->window;
  std::size_t total = 1;
  for (int a = 0; a < D; ++a) total *= std::size_t(grid_n);
  if (!c.gam) {
    h.counts = {long(total)};
    return h;
  }
  const auto& G = *c.gam;
  std::unordered_map<int, std::vector<int>> by_j;  // FJK chains touching j, as either end
  for (int i = 0; i < int(fjk.chains.size()); ++i) {
    by_j[fjk.chains[i].j].push_back(i);
    if (fjk.chains[i].k != fjk.chains[i].j) by_j[fjk.chains[i].k].push_back(i);
  }
  std::vector<int> stamp(total, -1), count(total, 0);
  int s = 0;
  for (int j : c.we) {
    auto it = by_j.find(j);
    if (it != by_j.end())
      for (int i : it->second)
        for (int q : fjk.chains[i].cubes) detail::stamp_box<D>(win, grid_n, G.cubes[q].box().dilated(2.0), s, stamp, count);
    ++s;
  }
  std::vector<int> stamp_p(total, -1), count_p(total, 0);
  s = 0;
  for (int q : fp.fp_sources) {
    auto add = [&](int k) {
      auto it = fp.by_j.find(k);
      if (it == fp.by_j.end()) return;
      for (int g : fp.chains[it->second].cubes)
        detail::stamp_box<D>(win, grid_n, G.cubes[g].box().dilated(2.0), s, stamp_p, count_p);
    };
    c.ext->for_each_intersecting(q, add);
    ++s;
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (std::size_t(count[i]) >= h.counts.size()) h.counts.resize(count[i] + 1, 0);
    ++h.counts[count[i]];
    h.max_overlap = std::max(h.max_overlap, count[i]);
    h.max_overlap_fp = std::max(h.max_overlap_fp, count_p[i]);
  }
  return h;
}

/// Constants measured on a reflection map.
struct ReflectStats {
  long we = 0;
  long wi = 0;
  long reflected = 0;
  long no_reflection = 0;
  long no_reflection_windowed = 0;
  long diam_order_violations = 0;  // diam(Q) > diam(Q*)
  double c_refl = 0.0;             // max of diam and distance ratios
  double max_diam_ratio = 0.0;
  double max_dist_ratio = 0.0;
  int c_pre = 0;
  double c_pair = 0.0;  // max dist(Q_j*, Q_k*) / diam(Q_j) over intersecting pairs
  std::vector<int> no_reflection_cubes;
};

/// Statistics over the We cubes accepted by `keep` (all when null).
template <int D>
ReflectStats reflect_stats(const CubeClassification<D>& c, const ReflectionMap<D>& refl,
                           const std::function<bool(int)>& keep = nullptr) {
  ReflectStats s;
  s.wi = c.gam ? c.wi_count() : 0;
  std::unordered_map<int, int> pre;
  for (std::size_t p = 0; p < c.we.size(); ++p) {
    int q = c.we[p];
    const auto& r = refl.pairs[p];
    if (r.status == ReflectStatus::Ok) ++pre[r.star];
    if (keep && !keep(q)) continue;
    ++s.we;
    if (r.status == ReflectStatus::NoReflection) {
      ++s.no_reflection;
      s.no_reflection_cubes.push_back(q);
      continue;
    }
    if (r.status == ReflectStatus::NoReflectionWindowed) {
      ++s.no_reflection_windowed;
      s.no_reflection_cubes.push_back(q);
      continue;
    }
    ++s.reflected;
    if (r.diam_ratio < 1.0 - 1e-12) ++s.diam_order_violations;
    s.max_diam_ratio = std::max(s.max_diam_ratio, r.diam_ratio);
    s.max_dist_ratio = std::max(s.max_dist_ratio, r.dist_ratio);
    c.ext->for_each_intersecting(q, [&](int k) {
      if (!c.in_we[k]) return;
      const auto& rk = refl.of(c, k);
      if (rk.status != ReflectStatus::Ok) return;
      double d = box_box_distance<D>(c.gam->cubes[r.star].box(), c.gam->cubes[rk.star].box());
      s.c_pair = std::max(s.c_pair, d / c.ext->cubes[q].diam());
    });
  }
  s.c_refl = std::max(s.max_diam_ratio, s.max_dist_ratio);
  for (std::size_t p = 0; p < c.we.size(); ++p) {
    const auto& r = refl.pairs[p];
    if (r.status == ReflectStatus::Ok && (!keep || keep(c.we[p]))) s.c_pre = std::max(s.c_pre, pre[r.star]);
  }
  return s;
}

/// Restricts a chain family to the chains whose Q_j is accepted by `keep`.
inline ChainFamily filter_family(const ChainFamily& f, const std::function<bool(int)>& keep) {
  ChainFamily out;
  out.kind = f.kind;
  for (const auto& ch : f.chains) {
    if (!keep(ch.j)) continue;
    out.max_length = std::max(out.max_length, int(ch.cubes.size()));
    out.chains.push_back(ch);
  }
  for (const auto& fl : f.failures)
    if (keep(fl.j)) out.failures.push_back(fl);
  return out;
}

/// We cubes away from the truncation: level in [root + 2, maxLevel - 2] and
/// the cube dilated by 16 inside the window.
template <int D>
std::function<bool(int)> core_cubes(const WhitneyDecomposition<D>& E) {
  return [&E](int q) {
    const auto& Q = E.cubes[q];
    if (Q.level < E.root_level + 2 || Q.level > E.max_level - 2) return false;
    return E.window.contains(Q.box().dilated(16.0));
  };
}

struct ReflectReport {
  ReflectParams params;
  ReflectStats stats;
  ChainFamily fjk;
  ChainFamily fp;
  OverlapHistogram overlap;
};

template <int D>
ReflectReport reflect_report(const ReflectGeometry<D>& geo, const ReflectParams& params, int grid_n) {
  ReflectReport r;
  r.params = params;
  auto c = classify(geo, params);
  auto m = reflect_all(c);
  r.stats = reflect_stats(c, m);
  r.fjk = build_fjk(c, m);
  r.fp = build_fp(c, m);
  r.overlap = overlap_histogram(c, r.fjk, r.fp, grid_n);
  return r;
}

inline std::string format_report(const ReflectReport& r) {
  std::ostringstream o;
  o << "A: " << r.params.A << "\nB: " << r.params.B << "\nmode: " << to_string(r.params.mode) << "\n";
  o << "we: " << r.stats.we << "\nwi: " << r.stats.wi << "\n";
  o << "C_refl: " << r.stats.c_refl << "\nC_pre: " << r.stats.c_pre << "\nC_pair: " << r.stats.c_pair << "\n";
  o << "maxChainLen: " << std::max(r.fjk.max_length, r.fp.max_length) << "\n";
  o << "fjk_chains: " << r.fjk.chains.size() << "\nfp_chains: " << r.fp.chains.size() << "\n";
  o << "K1: " << std::min(r.fjk.k1, r.fp.k1) << "\nK2: " << std::max(r.fjk.k2, r.fp.k2) << "\n";
  o << "fp_terminal_ratio: " << r.fp.min_terminal_ratio << "\nfp_nesting_failures: " << r.fp.nesting_failures
    << "\n";
  o << "maxOverlap: " << r.overlap.max_overlap << "\nmaxOverlapFP: " << r.overlap.max_overlap_fp << "\n";
  o << "failures: " << r.stats.no_reflection + r.stats.no_reflection_windowed + r.fjk.failures.size() +
                           r.fp.failures.size()
    << "\n";
  for (const auto& f : r.fjk.failures) o << "  fjk " << f.j << " " << f.k << " " << f.what << "\n";
  for (const auto& f : r.fp.failures) o << "  fp " << f.j << " " << f.what << "\n";
  return o.str();
}

}  // namespace sobext
