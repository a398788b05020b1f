#pragma once

// Analytic test functions vanishing near the Dirichlet part, and the grid
// functions used for zero extension.

#include <string>
#include <vector>

#include "../geometry/domain.hpp"
#include "partition.hpp"

namespace sobext {

template <int D>
struct TestFunction {
  std::string name;
  JetField<D> f;
  /// dist(supp f, D); +inf when D is empty.
  double gap = kInf;
};

/// Jet of dist(., D) at the variables' base point: analytic when the domain
/// provides it, otherwise central differences of the oracle (order <= 2).
template <int D>
Jet<D> dist_d_jet(const Domain<D>& dom, const std::array<Jet<D>, D>& X) {
  if (dom.dist_d_jet) return dom.dist_d_jet(X);
  int order = X[0].order();
  Point<D> x;
  for (int a = 0; a < D; ++a) x[a] = X[a].value();
  const double h = 1e-5;
  Jet<D> r(dom.dset(x), order);
  if (order == 0) return r;
  const auto& T = JetTable<D>::get();
  for (int i = 1; i < T.count[std::min(order, 2)]; ++i) {
    const auto& al = T.alpha[i];
    double v;
    if (T.deg[i] == 1) {
      int a = int(std::find(al.begin(), al.end(), 1) - al.begin());
      Point<D> p = x, m = x;
      p[a] += h;
      m[a] -= h;
      v = (dom.dset(p) - dom.dset(m)) / (2 * h);
    } else {
      int a = -1, b = -1;
      for (int c = 0; c < D; ++c)
        for (int t = 0; t < al[c]; ++t) (a < 0 ? a : b) = c;
      auto at = [&](double sa, double sb) {
        Point<D> p = x;
        p[a] += sa * h;
        p[b] += sb * h;
        return dom.dset(p);
      };
      v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
    }
    r.coeff(i) = v / T.factorial[i];
  }
  return r;
}

/// phi_n(t) = S(n t - 1): 0 on [0, 1/n], 1 on [2/n, inf).
template <int D>
Jet<D> stein_cutoff(const Jet<D>& t, double n, const Ramp& ramp) {
  return ramp(t * n - Jet<D>(1.0, t.order()));
}

/// profile(x) * phi_n(dist(x, D)).
template <int D>
TestFunction<D> make_test_function(const Domain<D>& dom, const std::string& name, JetField<D> profile, double n,
                                   int smoothness = 3) {
  TestFunction<D> t;
  t.name = name + " n=" + std::to_string(int(n));
  if (dom.d_empty()) {
    t.f = std::move(profile);
    return t;
  }
  t.gap = 1.0 / n;
  Ramp ramp(smoothness);
  t.f = [dom, profile, n, ramp](const std::array<Jet<D>, D>& X) {
    return profile(X) * stein_cutoff<D>(dist_d_jet<D>(dom, X), n, ramp);
  };
  return t;
}

/// Twelve smooth profiles on R^2: four polynomial, four trigonometric, four
/// Gaussian bump packs.
inline std::vector<std::pair<std::string, JetField<2>>> profile_library() {
  using J = Jet<2>;
  using V = std::array<J, 2>;
  auto gauss = [](double cx, double cy, double r, const V& v) {
    J dx = v[0] - J(cx, v[0].order()), dy = v[1] - J(cy, v[0].order());
    return exp((dx * dx + dy * dy) * (-1.0 / (r * r)));
  };
  return {
      {"one", [](const V& v) { return J(1.0, v[0].order()); }},
      {"x", [](const V& v) { return v[0] + 0.0 * v[1]; }},
      {"xy+y^2", [](const V& v) { return v[0] * v[1] + v[1] * v[1]; }},
      {"1+x-y/2+x^2/4", [](const V& v) { return 1.0 + v[0] - 0.5 * v[1] + 0.25 * v[0] * v[0]; }},
      {"sin x", [](const V& v) { return sin(v[0]) + 0.0 * v[1]; }},
      {"sin x cos 2y", [](const V& v) { return sin(v[0]) * cos(2.0 * v[1]); }},
      {"sin(3x+y)", [](const V& v) { return sin(3.0 * v[0] + v[1]); }},
      {"cos x cos y", [](const V& v) { return cos(v[0]) * cos(v[1]); }},
      {"bump(0.5,-0.5)", [gauss](const V& v) { return gauss(0.5, -0.5, 0.5, v); }},
      {"bumps(+-1,-0.25)",
       [gauss](const V& v) { return gauss(1.0, -0.25, 0.4, v) - 0.5 * gauss(-1.0, -0.25, 0.4, v); }},
      {"bumps(0,+-0.3)", [gauss](const V& v) { return gauss(0.0, 0.3, 0.3, v) + gauss(0.0, -0.3, 0.3, v); }},
      {"bumps(ring)",
       [gauss](const V& v) {
         J s(0.0, v[0].order());
         for (int i = 0; i < 6; ++i) s += gauss(std::cos(i * kPi / 3), std::sin(i * kPi / 3), 0.35, v);
         return s;
       }},
  };
}

/// The cutoff battery: every profile at n = 8 and n = 32.
inline std::vector<TestFunction<2>> cutoff_battery(const Domain<2>& dom, std::vector<double> ns = {8, 32}) {
  std::vector<TestFunction<2>> out;
  for (double n : ns)
    for (auto& [name, prof] : profile_library()) out.push_back(make_test_function<2>(dom, name, prof, n));
  return out;
}

/// Uniform n^d lattice of cell centres over a box with values on Omega
/// (NaN elsewhere).
template <int D>
struct GridFunction {
  Box<D> box;
  int n = 0;
  std::vector<double> values;
  JetField<D> analytic;
  double gap = kInf;

  Point<D> node(std::size_t i) const {
    Point<D> p;
    for (int a = 0; a < D; ++a) {
      p[a] = box.lo[a] + (double(i % n) + 0.5) * box.extent(a) / n;
      i /= n;
    }
    return p;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < D; ++a) s *= std::size_t(n);
    return s;
  }

  double cell_measure() const { return box.measure() / double(size()); }
};

template <int D>
GridFunction<D> sample(const Domain<D>& dom, const TestFunction<D>& t, const Box<D>& box, int n) {
  GridFunction<D> g;
  g.box = box;
  g.n = n;
  g.analytic = t.f;
  g.gap = t.gap;
  g.values.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    Point<D> x = g.node(i);
    g.values[i] = dom.inside(x) ? t.f(Jet<D>::variables(x, 0)).value() : std::nan("");
  }
  return g;
}

/// E_A f: values of f on Omega nodes, 0 on nodes of A outside Omega, NaN elsewhere.
template <int D>
GridFunction<D> zero_extend(const GridFunction<D>& f, const std::function<bool(const Point<D>&)>& in_a) {
  GridFunction<D> g = f;
  g.analytic = nullptr;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::isnan(g.values[i]) && in_a(g.node(i))) g.values[i] = 0.0;
  return g;
}

/// Midpoint L^p norm of the grid values over nodes accepted by `mask`
/// (NaN values are skipped); p = inf gives the max.
template <int D>
double grid_lp_norm(const GridFunction<D>& g, const std::function<bool(const Point<D>&)>& mask, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::isnan(g.values[i]) || !mask(g.node(i))) continue;
    double v = std::abs(g.values[i]);
    s = std::isinf(p) ? std::max(s, v) : s + g.cell_measure() * std::pow(v, p);
  }
  return std::isinf(p) ? s : std::pow(s, 1.0 / p);
}

}  // namespace sobext
