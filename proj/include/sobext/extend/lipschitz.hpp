#pragma once

// Lipschitz layer: boundary continuity probes, a battery vanishing on D, and
// measured Lipschitz seminorms.

#include <string>
#include <vector>

#include "norms.hpp"

namespace sobext {

struct ProbeRow {
  Point<2> x{};
  int m = 0;
  double step = 0.0;
  double mismatch = 0.0;  // max_{|alpha| <= k - 1} |d^alpha Ef(y_m) - d^alpha f(x)|
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  double max_ratio = 0.0;  // max mismatch / step
  double slope = 0.0;      // least-squares slope of log mismatch against log step
};

inline double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= double(x.size());
  my /= double(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

/// Approach sequences y_m = x + 2^-m n from Gamma into the exterior.
template <int D>
ProbeReport lipschitz_continuity_probe(const ExtendedFunction<D>& E, const std::vector<Point<D>>& xs,
                                       const Point<D>& normal, int m0, int m1) {
  ProbeReport rep;
  const auto& G = E.geometry();
  int order = std::max(0, G.k - 1);
  const auto& T = JetTable<D>::get();
  std::vector<double> lx, ly;
  for (const auto& x : xs) {
    auto fx = E.f()(Jet<D>::variables(x, order)).with_order(order);
    for (int m = m0; m <= m1; ++m) {
      double h = std::ldexp(1.0, -m);
      Point<D> y = add<D>(x, scale<D>(normal, h));
      if (G.locate(y) != Region::Exterior) continue;
      auto ey = E.eval(y, order);
      double mis = 0.0;
      for (int i = 0; i < T.count[order]; ++i) mis = std::max(mis, std::abs(ey.derivative_at(i) - fx.derivative_at(i)));
      rep.rows.push_back({x, m, h, mis});
      rep.max_ratio = std::max(rep.max_ratio, mis / h);
      if (mis > 0) {
        lx.push_back(std::log(h));
        ly.push_back(std::log(mis));
      }
    }
  }
  rep.slope = lsq_slope(lx, ly);
  return rep;
}

/// Lipschitz battery: f = profile * t/(1+t) with t = dist(., D), so f = 0 on D,
/// then multiplied by the cutoff phi_n(dist(., D)). With D empty, the profile.
template <int D>
JetField<D> vanishing_on_d(const Domain<D>& dom, JetField<D> profile) {
  if (dom.d_empty()) return profile;
  return [dom, profile](const std::array<Jet<D>, D>& X) {
    Jet<D> t = dist_d_jet<D>(dom, X);
    return profile(X) * t / (t + Jet<D>(1.0, t.order()));
  };
}

inline std::vector<TestFunction<2>> lipschitz_battery(const Domain<2>& dom, std::vector<double> ns = {8, 32}) {
  std::vector<TestFunction<2>> out;
  for (double n : ns)
    for (auto& [name, prof] : profile_library())
      out.push_back(make_test_function<2>(dom, name + "*t/(1+t)", vanishing_on_d<2>(dom, prof), n));
  return out;
}

/// max |grad g| over the midpoint lattice of `box` restricted by `region`.
template <int D>
double lipschitz_seminorm(const std::function<Jet<D>(const Point<D>&, int)>& g,
                          const std::function<bool(const Point<D>&)>& region, const Box<D>& box, int grid_n) {
  GridFunction<D> lattice;
  lattice.box = box;
  lattice.n = grid_n;
  double m = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    Point<D> x = lattice.node(i);
    if (!region(x)) continue;
    auto j = g(x, 1);
    double s = 0.0;
    for (int a = 1; a <= D; ++a) s += j.derivative_at(a) * j.derivative_at(a);
    m = std::max(m, std::sqrt(s));
  }
  return m;
}

struct LipschitzRow {
  std::string function;
  double lip_profile = 0.0;   // Lip(f) on Omega, f vanishing on D
  double lip_cutoff = 0.0;    // Lip(f_n) on Omega
  double lip_extended = 0.0;  // Lip(E f_n) on the stencil nodes
  double stein_ratio() const { return lip_profile > 0 ? lip_cutoff / lip_profile : 0.0; }
  double extension_ratio() const { return lip_cutoff > 0 ? lip_extended / lip_cutoff : 0.0; }
};

struct LipschitzReport {
  std::vector<LipschitzRow> rows;
  double stein_constant = 0.0;      // max Lip(f_n) / Lip(f)
  double extension_constant = 0.0;  // max Lip(E f_n) / Lip(f_n)
};

/// Seminorms by max |grad| at nodes; the exterior uses the stencil nodes.
inline LipschitzReport lipschitz_report(const ExtensionStencil<2>& st, std::vector<double> ns = {8, 32},
                                        int grid_n = 256) {
  const auto& G = *st.g;
  const auto& dom = G.dom;
  LipschitzReport rep;
  auto in_omega = [&](const Point<2>& x) { return dom.inside(x); };
  auto profiles = profile_library();
  for (double n : ns)
    for (auto& [name, prof] : profiles) {
      JetField<2> f = vanishing_on_d<2>(dom, prof);
      auto t = make_test_function<2>(dom, name + "*t/(1+t)", f, n);
      LipschitzRow row;
      row.function = t.name;
      row.lip_profile = lipschitz_seminorm<2>(
          [&](const Point<2>& x, int o) { return f(Jet<2>::variables(x, o)).with_order(o); }, in_omega, st.box, grid_n);
      row.lip_cutoff = lipschitz_seminorm<2>(
          [&](const Point<2>& x, int o) { return t.f(Jet<2>::variables(x, o)).with_order(o); }, in_omega, st.box, grid_n);
      ExtendedFunction<2> E(st.g, t.f);
      double m = row.lip_cutoff;
      for (std::size_t k = 0; k < st.size(); ++k) {
        if (st.region[k] != Region::Exterior) continue;
        auto j = E.exterior(st.node(k), st.terms(k), st.order);
        m = std::max(m, std::hypot(j.derivative_at(1), j.derivative_at(2)));
      }
      row.lip_extended = m;
      rep.stein_constant = std::max(rep.stein_constant, row.stein_ratio());
      rep.extension_constant = std::max(rep.extension_constant, row.extension_ratio());
      rep.rows.push_back(row);
    }
  return rep;
}

}  // namespace sobext
