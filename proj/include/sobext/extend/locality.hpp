#pragma once

// Locality of the extension: perturbations far away leave Ef unchanged.

#include <string>
#include <vector>

#include "norms.hpp"

namespace sobext {

/// Jet of |X - c|^2.
template <int D>
Jet<D> squared_radius(const std::array<Jet<D>, D>& X, const Point<D>& c) {
  Jet<D> s(0.0, X[0].order());
  for (int a = 0; a < D; ++a) {
    Jet<D> d = X[a] - Jet<D>(c[a], X[0].order());
    s += d * d;
  }
  return s;
}

/// A smooth perturbation vanishing on B(c, R).
template <int D>
JetField<D> outside_ball_perturbation(const Point<D>& c, double R) {
  Ramp ramp(3);
  return [c, R, ramp](const std::array<Jet<D>, D>& X) {
    Jet<D> t = squared_radius<D>(X, c) * (1.0 / (R * R)) - Jet<D>(1.0, X[0].order());
    Jet<D> w(1.0, X[0].order());
    for (int a = 0; a < D; ++a) w = w + 0.5 * sin((2.0 + a) * X[a]);
    return 3.0 * ramp(t) * w;
  };
}

/// Lattice nodes of B(c, r), n per axis over the bounding box.
template <int D>
std::vector<Point<D>> ball_nodes(const Point<D>& c, double r, int n) {
  std::vector<Point<D>> out;
  GridFunction<D> lat;
  lat.box = Box<D>::cube(c, r);
  lat.n = n;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    Point<D> x = lat.node(i);
    if (distance<D>(x, c) < r) out.push_back(x);
  }
  return out;
}

struct LocalityRow {
  Point<2> center{};
  double r = 0.0;
  double kappa = 0.0;       // smallest tested dilation with E(f + g) = Ef on B(x, r); 0 if none
  double max_change = 0.0;  // at that kappa
  double homogeneous = 0.0; // ||nabla^l Ef||_{B(x,r)} / ||nabla^l f||_{B(x, kappa r) cap Omega}
  long exterior_nodes = 0;
};

inline constexpr double kLocalityDilations[] = {2, 4, 8, 16};

/// Locality table for boundary centres and radii. The perturbation g vanishes
/// on B(x, kappa r); kappa is the smallest dilation leaving Ef on B(x, r)
/// unchanged to `tol`.
template <int D>
std::vector<LocalityRow> locality_report(GeometryPtr<D> g, const JetField<D>& f, const std::vector<Point<D>>& centers,
                                         const std::vector<double>& radii, int l, double p, int nodes = 32,
                                         double tol = 1e-12) {
  std::vector<LocalityRow> out;
  ExtendedFunction<D> E(g, f);
  for (const auto& c : centers)
    for (double r : radii) {
      LocalityRow row;
      row.center = c;
      row.r = r;
      auto pts = ball_nodes<D>(c, r, nodes);
      std::vector<Point<D>> usable;
      for (const auto& x : pts) {
        auto reg = g->locate(x);
        if (reg == Region::Unresolved || reg == Region::Outside) continue;
        usable.push_back(x);
        row.exterior_nodes += reg == Region::Exterior;
      }
      for (double kappa : kLocalityDilations) {
        auto pert = outside_ball_perturbation<D>(c, kappa * r);
        ExtendedFunction<D> Eg(g, [f, pert](const std::array<Jet<D>, D>& X) { return f(X) + pert(X); });
        double change = 0.0;
        for (const auto& x : usable) change = std::max(change, std::abs(Eg(x) - E(x)));
        if (change <= tol) {
          row.kappa = kappa;
          row.max_change = change;
          break;
        }
        row.max_change = change;
      }
      double kap = row.kappa > 0 ? row.kappa : 16.0;
      double hcell = std::pow(2.0 * r / nodes, D);
      SobolevAccumulator lhs(l, p), rhs(l, p);
      for (const auto& x : usable) lhs.add<D>(E.eval(x, l), hcell);
      double hbig = std::pow(2.0 * kap * r / (2 * nodes), D);
      for (const auto& x : ball_nodes<D>(c, kap * r, 2 * nodes))
        if (g->dom.inside(x)) rhs.add<D>(f(Jet<D>::variables(x, l)).with_order(l), hbig);
      double den = rhs.seminorm(l);
      row.homogeneous = den > 0 ? lhs.seminorm(l) / den : 0.0;
      out.push_back(row);
    }
  return out;
}

}  // namespace sobext
