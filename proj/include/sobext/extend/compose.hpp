#pragma once

// E = E_Gamma o E_0 through a larger domain with the same Neumann part.

#include <string>
#include <vector>

#include "norms.hpp"

namespace sobext {

template <int D>
JetField<D> zero_extension(const Domain<D>& dom, JetField<D> f) {
  return [dom, f](const std::array<Jet<D>, D>& X) {
    Point<D> x;
    for (int a = 0; a < D; ++a) x[a] = X[a].value();
    return dom.inside(x) ? f(X) : Jet<D>(0.0, X[0].order());
  };
}

/// E = E_Gamma o E_0: zero-extend f from Omega to the larger domain omega_gamma
/// (same Neumann part), then extend from there.
template <int D>
struct ComposedExtension {
  GeometryPtr<D> geometry;  // on omega_gamma
  Domain<D> dom;

  JetField<D> zero_extended(const JetField<D>& f) const { return zero_extension<D>(dom, f); }
  ExtendedFunction<D> extend(const JetField<D>& f) const { return ExtendedFunction<D>(geometry, zero_extended(f)); }
  TestFunction<D> zero_extended(const TestFunction<D>& t) const { return {t.name, zero_extended(t.f), t.gap}; }
};

/// Checks Omega inside omega_gamma and Gamma on its boundary by probes; throws NotASuperset.
template <int D>
void check_superset(const Domain<D>& dom, const Domain<D>& omega_gamma, int probes_per_axis = 96) {
  GridFunction<D> lat;
  lat.box = dom.window;
  lat.n = probes_per_axis;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    Point<D> x = lat.node(i);
    if (dom.inside(x) && !omega_gamma.inside(x))
      throw Error(ErrorKind::NotASuperset, "point of Omega outside the larger domain: " + to_string<D>(x));
  }
  double tol = std::max(dom.tol_b(), omega_gamma.tol_b());
  for (const auto& x : sample_pieces<D>(dom.gamma_pieces, dom.window.diam() / 256)) {
    if (!dom.window.contains(x)) continue;
    if (omega_gamma.boundary(x) > tol || omega_gamma.gamma(x) > tol)
      throw Error(ErrorKind::NotASuperset, "Gamma point not on the Neumann boundary of the larger domain: " +
                                               to_string<D>(x));
  }
}

template <int D>
ComposedExtension<D> compose_reference(const Domain<D>& dom, const Domain<D>& omega_gamma, int max_level, int k, const ReflectParams& params = {}) {
  check_superset<D>(dom, omega_gamma);
  ComposedExtension<D> c;
  c.geometry = build_extension_geometry<D>(omega_gamma, max_level, k, params);
  c.dom = dom;
  return c;
}

/// max |E0 f(a) - E0 f(b)| / |a - b| over pairs straddling D at offsets
/// +-h along the normal of each sampled D point (central differences).
template <int D>
double zero_extension_straddle(const Domain<D>& dom, const JetField<D>& f, double h, int samples = 400) {
  auto e0 = zero_extension<D>(dom, f);
  auto val = [&](const Point<D>& x) { return e0(Jet<D>::variables(x, 0)).value(); };
  double worst = 0.0;
  auto pts = sample_pieces<D>(dom.d_pieces, dom.window.diam() / samples);
  for (const auto& x : pts) {
    if (!dom.window.contains(x)) continue;
    for (int a = 0; a < D; ++a) {
      Point<D> u{}, v{};
      u = x;
      v = x;
      u[a] += h;
      v[a] -= h;
      worst = std::max(worst, std::abs(val(u) - val(v)) / (2 * h));
    }
  }
  return worst;
}

}  // namespace sobext
