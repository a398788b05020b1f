#pragma once

// Projection onto polynomials of total degree <= k - 1 on a cube, in a tensor
// Legendre basis, and the norm estimates it is checked against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "../core/error.hpp"
#include "../core/jet.hpp"
#include "../core/quadrature.hpp"
#include "../geometry/domain.hpp"

namespace sobext {

inline constexpr int kMaxPolyDegree = 8;

/// Monomial coefficients of the Legendre polynomials P_0..P_kMaxPolyDegree.
inline const std::vector<std::vector<double>>& legendre_table() {
  static const std::vector<std::vector<double>> t = [] {
    std::vector<std::vector<double>> p(kMaxPolyDegree + 1, std::vector<double>(kMaxPolyDegree + 1, 0.0));
    p[0][0] = 1.0;
    if (kMaxPolyDegree >= 1) p[1][1] = 1.0;
    for (int n = 1; n < kMaxPolyDegree; ++n)
      for (int m = 0; m <= n + 1; ++m) {
        double a = m > 0 ? (2 * n + 1) * p[n][m - 1] : 0.0;
        p[n + 1][m] = (a - n * p[n - 1][m]) / (n + 1);
      }
    return p;
  }();
  return t;
}

/// r-th derivative of P_n at u.
inline double legendre_derivative(int n, int r, double u) {
  if (r > n) return 0.0;
  const auto& c = legendre_table()[n];
  double s = 0.0;
  for (int m = n; m >= r; --m) {
    double f = 1.0;
    for (int i = 0; i < r; ++i) f *= m - i;
    s = s * u + c[m] * f;
  }
  return s;
}

/// Multi-indices of total degree <= deg, graded then lexicographic.
template <int D>
std::vector<MultiIndex<D>> total_degree_indices(int deg) {
  std::vector<MultiIndex<D>> out;
  for (int d = 0; d <= deg; ++d) {
    MultiIndex<D> a{};
    std::function<void(int, int)> rec = [&](int axis, int left) {
      if (axis == D - 1) {
        a[axis] = left;
        out.push_back(a);
        return;
      }
      for (int v = left; v >= 0; --v) {
        a[axis] = v;
        rec(axis + 1, left - v);
      }
    };
    rec(0, d);
  }
  return out;
}

/// Polynomial of degree <= k - 1 on a cube, stored in the Legendre basis of
/// u = 2 (x - c) / side.
template <int D>
struct CubePolynomial {
  Box<D> box;
  int k = 1;
  std::vector<MultiIndex<D>> basis;
  std::vector<double> coeffs;

  int degree_bound() const { return k - 1; }

  double derivative(const Point<D>& x, const MultiIndex<D>& alpha) const {
    if (degree<D>(alpha) > k - 1) return 0.0;
    Point<D> c = box.center();
    std::array<std::array<double, kMaxPolyDegree + 1>, D> tab{};
    double chain = 1.0;
    for (int a = 0; a < D; ++a) {
      double s = 2.0 / box.extent(a);
      double u = (x[a] - c[a]) * s;
      for (int n = 0; n < k; ++n) tab[a][n] = legendre_derivative(n, alpha[a], u);
      chain *= std::pow(s, alpha[a]);
    }
    double v = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      double t = coeffs[i];
      for (int a = 0; a < D && t != 0.0; ++a) t *= tab[a][basis[i][a]];
      v += t;
    }
    return v * chain;
  }

  double operator()(const Point<D>& x) const { return derivative(x, MultiIndex<D>{}); }

  /// Taylor jet at x up to the given order.
  Jet<D> jet(const Point<D>& x, int order) const {
    const auto& T = JetTable<D>::get();
    Jet<D> r(0.0, order);
    for (int i = 0; i < T.count[order]; ++i) r.coeff(i) = derivative(x, T.alpha[i]) / T.factorial[i];
    return r;
  }

  /// Coefficients in powers of (x - centre).
  std::vector<std::pair<MultiIndex<D>, double>> to_monomial() const {
    auto idx = total_degree_indices<D>(k - 1);
    std::vector<std::pair<MultiIndex<D>, double>> out;
    for (const auto& m : idx) {
      double v = 0.0;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        double t = coeffs[i];
        for (int a = 0; a < D; ++a) {
          if (m[a] > basis[i][a]) {
            t = 0.0;
            break;
          }
          t *= legendre_table()[basis[i][a]][m[a]] * std::pow(2.0 / box.extent(a), m[a]);
        }
        v += t;
      }
      out.push_back({m, v});
    }
    return out;
  }
};

template <int D>
double eval_monomial(const std::vector<std::pair<MultiIndex<D>, double>>& mono, const Point<D>& c,
                     const Point<D>& x) {
  double v = 0.0;
  for (const auto& [m, a] : mono) {
    double t = a;
    for (int i = 0; i < D; ++i) t *= std::pow(x[i] - c[i], m[i]);
    v += t;
  }
  return v;
}

/// Quadrature nodes and weights on a box.
template <int D>
struct NodeSet {
  std::vector<Point<D>> x;
  std::vector<double> w;
};

template <int D>
NodeSet<D> gauss_nodes(const Box<D>& box, int n) {
  NodeSet<D> s;
  for_each_gauss_node<D>(box, n, [&](const Point<D>& p, double w) {
    s.x.push_back(p);
    s.w.push_back(w);
  });
  return s;
}

/// Cell centres of an n^d grid over the box, each weighted by the cell measure.
template <int D>
NodeSet<D> midpoint_nodes(const Box<D>& box, int n) {
  NodeSet<D> s;
  std::array<int, D> k{};
  double w = box.measure() / std::pow(double(n), D);
  while (true) {
    Point<D> p;
    for (int a = 0; a < D; ++a) p[a] = box.lo[a] + (k[a] + 0.5) * box.extent(a) / n;
    s.x.push_back(p);
    s.w.push_back(w);
    int a = 0;
    while (a < D && ++k[a] == n) k[a++] = 0;
    if (a == D) break;
  }
  return s;
}

namespace detail {

/// Solves the symmetric positive definite system G c = b in place (Cholesky).
inline void spd_solve(std::vector<double> G, std::vector<double>& b, int n) {
  for (int j = 0; j < n; ++j) {
    double d = G[j * n + j];
    for (int k = 0; k < j; ++k) d -= G[j * n + k] * G[j * n + k];
    if (!(d > 0.0)) throw Error(ErrorKind::DegenerateCube, "singular Gram matrix");
    d = std::sqrt(d);
    G[j * n + j] = d;
    for (int i = j + 1; i < n; ++i) {
      double s = G[i * n + j];
      for (int k = 0; k < j; ++k) s -= G[i * n + k] * G[j * n + k];
      G[i * n + j] = s / d;
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= G[i * n + k] * b[k];
    b[i] = s / G[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= G[k * n + i] * b[k];
    b[i] = s / G[i * n + i];
  }
}

}  // namespace detail

/// L2 projection of f onto P_{k-1}(Q) under a discrete inner product.
template <int D>
CubePolynomial<D> project(const std::function<double(const Point<D>&)>& f, const Box<D>& box, int k,
                          const NodeSet<D>& nodes) {
  for (int a = 0; a < D; ++a)
    if (!(box.extent(a) > 0.0)) throw Error(ErrorKind::DegenerateCube, "cube with zero side");
  if (k < 1 || k - 1 > kMaxPolyDegree) throw Error(ErrorKind::Usage, "degree bound out of range");
  CubePolynomial<D> P;
  P.box = box;
  P.k = k;
  P.basis = total_degree_indices<D>(k - 1);
  int n = int(P.basis.size());
  Point<D> c = box.center();
  std::vector<double> G(n * n, 0.0), b(n, 0.0), phi(n);
  for (std::size_t q = 0; q < nodes.x.size(); ++q) {
    const auto& x = nodes.x[q];
    for (int i = 0; i < n; ++i) {
      double t = 1.0;
      for (int a = 0; a < D; ++a) t *= legendre_derivative(P.basis[i][a], 0, 2.0 * (x[a] - c[a]) / box.extent(a));
      phi[i] = t;
    }
    double fx = f(x), w = nodes.w[q];
    for (int i = 0; i < n; ++i) {
      b[i] += w * fx * phi[i];
      for (int j = 0; j <= i; ++j) G[i * n + j] += w * phi[i] * phi[j];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) G[i * n + j] = G[j * n + i];
  detail::spd_solve(G, b, n);
  P.coeffs = b;
  return P;
}

/// Gauss-Legendre version with q points per axis (k + 2 by default).
template <int D>
CubePolynomial<D> project(const std::function<double(const Point<D>&)>& f, const Box<D>& box, int k, int q = 0) {
  for (int a = 0; a < D; ++a)
    if (!(box.extent(a) > 0.0)) throw Error(ErrorKind::DegenerateCube, "cube with zero side");
  return project<D>(f, box, k, gauss_nodes<D>(box, q > 0 ? q : k + 2));
}

template <int D>
std::function<double(const Point<D>&)> value_of(const JetField<D>& f) {
  return [f](const Point<D>& x) { return f(Jet<D>::variables(x, 0)).value(); };
}

/// Jet of f at x to the given order.
template <int D>
Jet<D> jet_at(const JetField<D>& f, const Point<D>& x, int order) {
  return f(Jet<D>::variables(x, order)).with_order(order);
}

/// ||g||_{L^p} over the node set; p = inf gives the max over nodes.
template <int D>
double lp_norm(const std::function<double(const Point<D>&)>& g, const NodeSet<D>& nodes, double p) {
  double s = 0.0;
  for (std::size_t q = 0; q < nodes.x.size(); ++q) {
    double v = std::abs(g(nodes.x[q]));
    if (std::isinf(p))
      s = std::max(s, v);
    else
      s += nodes.w[q] * std::pow(v, p);
  }
  return std::isinf(p) ? s : std::pow(s, 1.0 / p);
}

/// Pointwise |nabla^l g| as (sum_{|alpha| = l} |d^alpha g|^p)^(1/p), max for p = inf.
template <int D>
double grad_norm(const Jet<D>& j, int l, double p) {
  const auto& T = JetTable<D>::get();
  double s = 0.0;
  for (int i = 0; i < T.count[j.order()]; ++i) {
    if (T.deg[i] != l) continue;
    double v = std::abs(j.derivative_at(i));
    s = std::isinf(p) ? std::max(s, v) : s + std::pow(v, p);
  }
  return std::isinf(p) ? s : std::pow(s, 1.0 / p);
}

template <int D>
NodeSet<D> merge_nodes(const std::vector<Box<D>>& boxes, int n) {
  NodeSet<D> all;
  for (const auto& b : boxes) {
    auto s = gauss_nodes<D>(b, n);
    all.x.insert(all.x.end(), s.x.begin(), s.x.end());
    all.w.insert(all.w.end(), s.w.begin(), s.w.end());
  }
  return all;
}

struct PoincareResult {
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  bool zero_denominator = false;
};

inline constexpr int kPolyfitQuadrature = 12;

/// ||d^alpha (f - Pf)||_{L^p(U)} / (diam(Q)^(l - |alpha|) ||nabla^l f||_{L^p(U)})
/// with P the projection on `proj_box` and U the union of `region`.
/// A vanishing denominator with a vanishing numerator gives ratio 0; with a
/// nonzero numerator it throws ZeroDenominator.
template <int D>
PoincareResult poincare_ratio(const JetField<D>& f, const Box<D>& proj_box, const std::vector<Box<D>>& region, int k,
                              int l, const MultiIndex<D>& alpha, double p, double diam,
                              int quad = kPolyfitQuadrature) {
  if (l > k || degree<D>(alpha) > l) throw Error(ErrorKind::Usage, "need |alpha| <= l <= k");
  auto P = project<D>(value_of<D>(f), proj_box, k, quad);
  auto nodes = merge_nodes<D>(region, quad);
  int order = std::max(l, degree<D>(alpha));
  PoincareResult r;
  r.numerator = lp_norm<D>(
      [&](const Point<D>& x) { return jet_at<D>(f, x, order).derivative(alpha) - P.derivative(x, alpha); }, nodes, p);
  r.denominator = lp_norm<D>([&](const Point<D>& x) { return grad_norm<D>(jet_at<D>(f, x, l), l, p); }, nodes, p);
  r.denominator *= std::pow(diam, l - degree<D>(alpha));
  if (r.denominator <= 1e-300) {
    r.zero_denominator = true;
    if (r.numerator > 1e-10) throw Error(ErrorKind::ZeroDenominator, "nabla^l f vanishes but f - Pf does not");
    return r;
  }
  r.ratio = r.numerator / r.denominator;
  return r;
}

/// Poincare check on Q, or on Q union a touching cube R with P taken on Q.
template <int D>
PoincareResult poincare_check(const JetField<D>& f, const Box<D>& Q, const std::optional<Box<D>>& R, int k, int l,
                              const MultiIndex<D>& alpha, double p) {
  std::vector<Box<D>> region{Q};
  if (R) region.push_back(*R);
  return poincare_ratio<D>(f, Q, region, k, l, alpha, p, Q.diam());
}

/// ||d^alpha Pf||_{L^p(Q)} / ||d^alpha f||_{L^p(Q)}.
template <int D>
double projection_stability(const JetField<D>& f, const Box<D>& Q, int k, const MultiIndex<D>& alpha, double p,
                            int quad = kPolyfitQuadrature) {
  auto P = project<D>(value_of<D>(f), Q, k, quad);
  auto nodes = gauss_nodes<D>(Q, quad);
  int order = degree<D>(alpha);
  double num = lp_norm<D>([&](const Point<D>& x) { return P.derivative(x, alpha); }, nodes, p);
  double den = lp_norm<D>([&](const Point<D>& x) { return jet_at<D>(f, x, order).derivative(alpha); }, nodes, p);
  if (den <= 1e-300) {
    if (num > 1e-10) throw Error(ErrorKind::ZeroDenominator, "d^alpha f vanishes but d^alpha Pf does not");
    return 0.0;
  }
  return num / den;
}

/// ||P||_{L^p(Q)} / ||P||_{L^p(R)} for R inside Q with |R| >= kappa |Q|.
template <int D>
double norm_comparison_check(const CubePolynomial<D>& P, const Box<D>& Q, const Box<D>& R, double p, double kappa) {
  if (!Q.contains(R)) throw Error(ErrorKind::HypothesisViolated, "R is not inside Q");
  if (R.measure() < kappa * Q.measure() * (1 - 1e-12))
    throw Error(ErrorKind::HypothesisViolated, "|R| < kappa |Q|");
  int n = std::max(P.k + 2, 2 * P.k + 4);
  auto g = [&](const Point<D>& x) { return P(x); };
  double num = lp_norm<D>(g, gauss_nodes<D>(Q, n), p);
  double den = lp_norm<D>(g, gauss_nodes<D>(R, n), p);
  if (den <= 1e-300) {
    if (num > 1e-12) throw Error(ErrorKind::ZeroDenominator, "P vanishes on R only");
    return 1.0;
  }
  return num / den;
}

}  // namespace sobext
