#pragma once

#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "vec.hpp"

namespace sobext {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxGaussPoints = 64;

inline GaussRule compute_gauss_rule(int n) {
  GaussRule r;
  if (n == 1) return GaussRule{{0.0}, {2.0}};
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

inline const GaussRule& gauss_rule(int n) {
  if (n < 1 || n > kMaxGaussPoints) throw std::out_of_range("gauss_rule: unsupported size");
  static std::vector<GaussRule> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    cache.resize(kMaxGaussPoints + 1);
    for (int k = 1; k <= kMaxGaussPoints; ++k) cache[k] = compute_gauss_rule(k);
  });
  return cache[n];
}

/// Visit the tensor Gauss-Legendre nodes of a box; fn(point, weight).
template <int D, class Fn>
void for_each_gauss_node(const Box<D>& box, int n, Fn&& fn) {
  const GaussRule& g = gauss_rule(n);
  std::array<int, D> idx{};
  double jac = 1.0;
  for (int i = 0; i < D; ++i) jac *= 0.5 * box.extent(i);
  while (true) {
    Point<D> p;
    double w = jac;
    for (int i = 0; i < D; ++i) {
      p[i] = 0.5 * (box.lo[i] + box.hi[i]) + 0.5 * box.extent(i) * g.nodes[idx[i]];
      w *= g.weights[idx[i]];
    }
    fn(p, w);
    int a = 0;
    while (a < D && ++idx[a] == n) idx[a++] = 0;
    if (a == D) break;
  }
}

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to relative tolerance rel.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double rel = 1e-6, int max_depth = 40) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double tol = rel * std::abs(whole);
  if (tol == 0.0) tol = rel;
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace sobext
