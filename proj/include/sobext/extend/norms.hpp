#pragma once

// Sobolev norms by composite midpoint quadrature and the operator-norm report.

#include <string>
#include <vector>

#include "extension.hpp"
#include "testfn.hpp"

namespace sobext {

/// Quadrature nodes for ||Ef|| over a box: composite midpoint cells aligned
/// with the Whitney cubes of the complement of the boundary on the Omega side,
/// and with the exterior cubes cut at every bump breakpoint on the other.
/// Cells are no wider than box side / n, with at least three per piece, so the
/// bump ramps on small cubes are resolved. Shared by every f for one geometry.
template <int D>
struct ExtensionStencil {
  GeometryPtr<D> g;
  Box<D> box;
  int n = 0;
  int order = 0;
  std::vector<Point<D>> nodes;
  std::vector<double> weight;
  std::vector<Region> region;  // Omega or Exterior
  std::vector<int> off;        // exterior terms of node i: [off[i], off[i+1])
  std::vector<int> term_j;
  std::vector<double> term_c;  // jet coefficients, stride = jet size

  std::size_t size() const { return nodes.size(); }
  const Point<D>& node(std::size_t i) const { return nodes[i]; }
  int stride() const { return JetTable<D>::get().count[order]; }

  std::vector<typename PartitionOfUnity<D>::Term> terms(std::size_t i) const {
    std::vector<typename PartitionOfUnity<D>::Term> out;
    int s = stride();
    for (int t = off[i]; t < off[i + 1]; ++t) {
      Jet<D> phi(0.0, order);
      for (int c = 0; c < s; ++c) phi.coeff(c) = term_c[std::size_t(t) * s + c];
      out.push_back({term_j[t], phi});
    }
    return out;
  }

  /// Measure of the box not covered by any node cell (unresolved shell).
  double unresolved_fraction() const {
    double w = 0.0;
    for (double x : weight) w += x;
    return std::max(0.0, 1.0 - w / box.measure());
  }
};

namespace detail {

inline constexpr int kMinCellsPerPiece = 3;

/// Midpoint cells of the tensor pieces of `b` cut at `cuts[a]`; fn(x, w).
template <int D, class Fn>
void piecewise_midpoint(const Box<D>& b, std::array<std::vector<double>, D> cuts, double h, Fn&& fn) {
  std::array<std::vector<double>, D> pts, wts;
  for (int a = 0; a < D; ++a) {
    auto& c = cuts[a];
    c.push_back(b.lo[a]);
    c.push_back(b.hi[a]);
    std::sort(c.begin(), c.end());
    double tiny = 1e-12 * b.extent(a);
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      double lo = std::max(c[i], b.lo[a]), hi = std::min(c[i + 1], b.hi[a]);
      if (hi - lo <= tiny) continue;
      int m = std::max(kMinCellsPerPiece, int(std::ceil((hi - lo) / h - 1e-9)));
      for (int t = 0; t < m; ++t) {
        pts[a].push_back(lo + (t + 0.5) * (hi - lo) / m);
        wts[a].push_back((hi - lo) / m);
      }
    }
  }
  std::array<std::size_t, D> idx{};
  while (true) {
    Point<D> x;
    double w = 1.0;
    for (int a = 0; a < D; ++a) {
      x[a] = pts[a][idx[a]];
      w *= wts[a][idx[a]];
    }
    fn(x, w);
    int a = 0;
    while (a < D && ++idx[a] == pts[a].size()) idx[a++] = 0;
    if (a == D) break;
  }
}

template <int D>
bool clip(const Box<D>& a, const Box<D>& b, Box<D>& out) {
  for (int i = 0; i < D; ++i) {
    out.lo[i] = std::max(a.lo[i], b.lo[i]);
    out.hi[i] = std::min(a.hi[i], b.hi[i]);
    if (out.hi[i] <= out.lo[i]) return false;
  }
  return true;
}

}  // namespace detail

template <int D>
ExtensionStencil<D> make_stencil(GeometryPtr<D> g, const Box<D>& box, int n, int order) {
  ExtensionStencil<D> s;
  s.g = g;
  s.box = box;
  s.n = n;
  s.order = order;
  const auto& G = *g;
  const double h = box.extent(0) / n;
  int stride = s.stride();
  s.off.push_back(0);
  auto omega_side = decompose(G.dom.boundary, G.dom.window, G.c.ext->max_level);
  for (const auto& q : omega_side.cubes) {
    Box<D> b;
    if (!G.dom.inside(q.center()) || !detail::clip<D>(q.box(), box, b)) continue;
    detail::piecewise_midpoint<D>(b, {}, h, [&](const Point<D>& x, double w) {
      s.nodes.push_back(x);
      s.weight.push_back(w);
      s.region.push_back(Region::Omega);
      s.off.push_back(int(s.term_j.size()));
    });
  }
  const auto& ext = *G.c.ext;
  const double outer = G.pou.outer(), inner = outer - kBumpRampWidth;
  for (int q = 0; q < ext.size(); ++q) {
    Box<D> b;
    if (!detail::clip<D>(ext.cubes[q].box(), box, b)) continue;
    std::array<std::vector<double>, D> cuts;
    auto add_cuts = [&](int j) {
      Point<D> c = ext.cubes[j].center();
      double sd = ext.cubes[j].side();
      for (int a = 0; a < D; ++a)
        for (double r : {-outer, -inner, inner, outer}) cuts[a].push_back(c[a] + r * sd);
    };
    add_cuts(q);
    ext.for_each_intersecting(q, add_cuts);
    detail::piecewise_midpoint<D>(b, cuts, h, [&](const Point<D>& x, double w) {
      s.nodes.push_back(x);
      s.weight.push_back(w);
      s.region.push_back(Region::Exterior);
      for (const auto& t : G.pou.phis(x, q, order)) {
        s.term_j.push_back(t.j);
        for (int c = 0; c < stride; ++c) s.term_c.push_back(t.phi.coeff(c));
      }
      s.off.push_back(int(s.term_j.size()));
    });
  }
  return s;
}

/// Accumulates sum_{|alpha| = m} ||d^alpha g||_p^p (or the max for p = inf)
/// for m = 0..l.
struct SobolevAccumulator {
  int l = 0;
  double p = 2.0;
  std::vector<double> parts;

  SobolevAccumulator(int l_, double p_) : l(l_), p(p_), parts(l_ + 1, 0.0) {}

  template <int D>
  void add(const Jet<D>& j, double w) {
    const auto& T = JetTable<D>::get();
    for (int i = 0; i < T.count[l]; ++i) {
      double v = std::abs(j.derivative_at(i));
      if (std::isinf(p))
        parts[T.deg[i]] = std::max(parts[T.deg[i]], v);
      else
        parts[T.deg[i]] += w * std::pow(v, p);
    }
  }

  /// ||g||_{W^{m,p}}.
  double norm(int m) const {
    double s = 0.0;
    for (int i = 0; i <= m; ++i) s = std::isinf(p) ? std::max(s, parts[i]) : s + parts[i];
    return std::isinf(p) ? s : std::pow(s, 1.0 / p);
  }

  /// ||nabla^m g||_p.
  double seminorm(int m) const { return std::isinf(p) ? parts[m] : std::pow(parts[m], 1.0 / p); }
};

/// ||g||_{W^{l,p}} over the lattice nodes of `box` accepted by `region`.
template <int D>
double sobolev_norm(const std::function<Jet<D>(const Point<D>&, int)>& g,
                    const std::function<bool(const Point<D>&)>& region, const Box<D>& box, int l, double p,
                    int grid_n) {
  GridFunction<D> lattice;
  lattice.box = box;
  lattice.n = grid_n;
  SobolevAccumulator acc(l, p);
  double w = lattice.cell_measure();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    Point<D> x = lattice.node(i);
    if (region(x)) acc.add<D>(g(x, l), w);
  }
  return acc.norm(l);
}

struct NormRow {
  std::string function;
  int l = 0;
  double total = 0.0;     // ||Ef||_{W^{l,p}(box)}
  double exterior = 0.0;  // ||Ef||_{W^{l,p}(box minus cl(Omega))}
  double omega = 0.0;     // ||f||_{W^{l,p}(Omega cap box)}
  double ratio() const { return omega > 0.0 ? total / omega : 0.0; }
  double exterior_ratio() const { return omega > 0.0 ? exterior / omega : 0.0; }
};

struct NormReport {
  std::string domain;
  int k = 1;
  double p = 2.0;
  int grid_n = 0;
  std::vector<double> ratio;           // max over the battery, per l
  std::vector<double> exterior_ratio;  // max over the battery, per l
  std::vector<NormRow> rows;
  double shell_fraction = 0.0;          // unresolved lattice nodes / all nodes
  double whitney_unresolved = 0.0;      // unresolved measure / window measure
};

/// max over the battery of ||Ef||_{W^{l,p}(box)} / ||f||_{W^{l,p}(Omega cap box)}
/// for l = 0..k, plus the exterior-only ratio; one report per p. The
/// unresolved shell is left out of both sides.
template <int D>
std::vector<NormReport> operator_norm_estimate(const ExtensionStencil<D>& st,
                                               const std::vector<TestFunction<D>>& battery,
                                               const std::vector<double>& ps) {
  const auto& G = *st.g;
  int L = std::min(G.k, st.order);
  std::vector<NormReport> reps(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto& rep = reps[i];
    rep.domain = G.dom.name;
    rep.k = G.k;
    rep.p = ps[i];
    rep.grid_n = st.n;
    rep.ratio.assign(L + 1, 0.0);
    rep.exterior_ratio.assign(L + 1, 0.0);
    rep.shell_fraction = st.unresolved_fraction();
    rep.whitney_unresolved = G.c.ext->unresolved_measure() / G.dom.window.measure();
  }
  for (const auto& t : battery) {
    ExtendedFunction<D> E(st.g, t.f);
    std::vector<SobolevAccumulator> tot, ext, om;
    for (double p : ps) {
      tot.emplace_back(L, p);
      ext.emplace_back(L, p);
      om.emplace_back(L, p);
    }
    for (std::size_t i = 0; i < st.size(); ++i) {
      const Point<D>& x = st.node(i);
      double w = st.weight[i];
      if (st.region[i] == Region::Omega) {
        auto j = t.f(Jet<D>::variables(x, L)).with_order(L);
        for (std::size_t a = 0; a < ps.size(); ++a) {
          tot[a].add<D>(j, w);
          om[a].add<D>(j, w);
        }
      } else {
        auto j = E.exterior(x, st.terms(i), st.order).with_order(L);
        for (std::size_t a = 0; a < ps.size(); ++a) {
          tot[a].add<D>(j, w);
          ext[a].add<D>(j, w);
        }
      }
    }
    for (std::size_t a = 0; a < ps.size(); ++a)
      for (int l = 0; l <= L; ++l) {
        NormRow r{t.name, l, tot[a].norm(l), ext[a].norm(l), om[a].norm(l)};
        reps[a].ratio[l] = std::max(reps[a].ratio[l], r.ratio());
        reps[a].exterior_ratio[l] = std::max(reps[a].exterior_ratio[l], r.exterior_ratio());
        reps[a].rows.push_back(r);
      }
  }
  return reps;
}

template <int D>
NormReport operator_norm_estimate(const ExtensionStencil<D>& st, const std::vector<TestFunction<D>>& battery,
                                  double p) {
  return operator_norm_estimate<D>(st, battery, std::vector<double>{p})[0];
}

template <int D>
NormReport operator_norm_estimate(GeometryPtr<D> g, const std::vector<TestFunction<D>>& battery, double p,
                                  int grid_n, std::optional<Box<D>> box = std::nullopt) {
  auto st = make_stencil<D>(g, box ? *box : g->dom.window, grid_n, g->k);
  return operator_norm_estimate<D>(st, battery, p);
}

}  // namespace sobext
