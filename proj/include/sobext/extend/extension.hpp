#pragma once

// The extension operator: f on Omega, 0 on D, and on the exterior the sum of
// the reflected-cube polynomials weighted by the partition of unity.

#include <memory>
#include <mutex>
#include <unordered_map>

#include "../polyfit/polyfit.hpp"
#include "../reflect/classify.hpp"
#include "partition.hpp"

namespace sobext {

enum class Region { Omega, OnD, OnGamma, Exterior, Unresolved, Outside };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::Omega: return "omega";
    case Region::OnD: return "D";
    case Region::OnGamma: return "gamma";
    case Region::Exterior: return "exterior";
    case Region::Unresolved: return "unresolved";
    case Region::Outside: return "outside";
  }
  return "?";
}

inline constexpr int kExtendQuadrature = 8;

/// Everything the operator needs that does not depend on f.
template <int D>
struct ExtensionGeometry {
  Domain<D> dom;
  CubeClassification<D> c;
  ReflectionMap<D> refl;
  PartitionOfUnity<D> pou;
  int k = 1;
  int quad = kExtendQuadrature;

  /// Region of x and, for exterior points, the cube of W(cl(Omega)) holding it.
  Region locate(const Point<D>& x, int* cube = nullptr) const {
    if (!dom.window.contains(x)) return Region::Outside;
    if (dom.inside(x)) return Region::Omega;
    double tol = dom.tol_b();
    if (dom.dset(x) <= tol) return Region::OnD;
    if (dom.gamma(x) <= tol) return Region::OnGamma;
    auto look = c.ext->containing(x);
    if (look.kind == CubeLookup<D>::Unresolved) return Region::Unresolved;
    if (look.kind == CubeLookup<D>::None) return Region::OnGamma;
    if (cube) *cube = look.index;
    return Region::Exterior;
  }
};

template <int D>
using GeometryPtr = std::shared_ptr<const ExtensionGeometry<D>>;

/// Builds the decompositions, classification, reflections and partition.
/// Throws ReflectionIncomplete when some We cube has no reflection.
template <int D>
GeometryPtr<D> build_extension_geometry(const Domain<D>& dom, int max_level, int k,
                                        const ReflectParams& params = {}, double outer = kBumpOuter) {
  auto g = std::make_shared<ExtensionGeometry<D>>();
  g->dom = dom;
  g->k = k;
  g->quad = std::max(k + 2, kExtendQuadrature);
  auto geo = build_geometry<D>(dom, max_level);
  g->c = classify(geo, params);
  g->refl = reflect_all(g->c);
  for (const auto& p : g->refl.pairs)
    if (p.status != ReflectStatus::Ok) {
      const auto& q = g->c.ext->cubes[p.q];
      throw Error(ErrorKind::ReflectionIncomplete,
                  std::string(to_string(p.status)) + " at cube centred " + to_string<D>(q.center()));
    }
  g->pou = PartitionOfUnity<D>(g->c.ext, g->c.in_we, k, outer);
  return g;
}

/// Ef for one f; projections on reflected cubes are computed on demand.
template <int D>
class ExtendedFunction {
 public:
  ExtendedFunction(GeometryPtr<D> g, JetField<D> f) : g_(std::move(g)), f_(std::move(f)) {}

  const ExtensionGeometry<D>& geometry() const { return *g_; }
  const JetField<D>& f() const { return f_; }

  /// (E_{Q_j*} f)_{Q_j*}: projection of the zero extension of f on Q_j*.
  const CubePolynomial<D>& polynomial(int j) const {
    std::lock_guard<std::mutex> lock(*mu_);
    auto it = cache_.find(j);
    if (it != cache_.end()) return it->second;
    const auto& G = *g_;
    int star = G.refl.of(G.c, j).star;
    Box<D> box = G.c.gam->cubes[star].box();
    const auto& dom = G.dom;
    const auto& f = f_;
    auto zero_ext = [&dom, &f](const Point<D>& x) {
      return dom.inside(x) ? f(Jet<D>::variables(x, 0)).value() : 0.0;
    };
    return cache_.emplace(j, project<D>(zero_ext, box, G.k, G.quad)).first->second;
  }

  /// Exterior value from precomputed partition terms.
  Jet<D> exterior(const Point<D>& x, const std::vector<typename PartitionOfUnity<D>::Term>& terms, int order) const {
    Jet<D> r(0.0, order);
    for (const auto& t : terms) r += polynomial(t.j).jet(x, order) * t.phi;
    return r;
  }

  /// Jet of Ef at x. Throws UnresolvedQuery in the unresolved shell.
  Jet<D> eval(const Point<D>& x, int order) const {
    int q = -1;
    switch (g_->locate(x, &q)) {
      case Region::Omega:
      case Region::OnGamma:
        return f_(Jet<D>::variables(x, order)).with_order(order);
      case Region::OnD:
        return Jet<D>(0.0, order);
      case Region::Exterior:
        return exterior(x, g_->pou.phis(x, q, order), order);
      case Region::Unresolved:
        throw Error(ErrorKind::UnresolvedQuery, "point in the unresolved shell: " + to_string<D>(x));
      case Region::Outside:
        break;
    }
    throw Error(ErrorKind::UnresolvedQuery, "point outside the window: " + to_string<D>(x));
  }

  double operator()(const Point<D>& x) const { return eval(x, 0).value(); }

 private:
  GeometryPtr<D> g_;
  JetField<D> f_;
  mutable std::unordered_map<int, CubePolynomial<D>> cache_;
  std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
};

template <int D>
ExtendedFunction<D> build_extension(GeometryPtr<D> g, JetField<D> f) {
  return ExtendedFunction<D>(std::move(g), std::move(f));
}

}  // namespace sobext
