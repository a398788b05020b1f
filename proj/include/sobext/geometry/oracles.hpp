#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "../core/vec.hpp"

namespace sobext {

/// Certified enclosure [lower, upper] of dist(box, F).
struct Interval {
  double lower = 0.0;
  double upper = kInf;
};

/// Distance oracle for a closed set F.
template <int D>
struct SetOracle {
  /// dist(x, F); +inf when F is empty.
  std::function<double(const Point<D>&)> distance;
  /// For x in F, a lower bound on dist(x, complement of F); unset for null sets.
  std::function<double(const Point<D>&)> depth;
  /// Exact dist(box, F) when available.
  std::function<double(const Box<D>&)> box_distance;
  bool is_empty = false;

  double operator()(const Point<D>& p) const { return is_empty ? kInf : distance(p); }

  Interval box_bounds(const Box<D>& b) const {
    if (is_empty) return {kInf, kInf};
    if (box_distance) {
      double d = box_distance(b);
      return {d, d};
    }
    Point<D> c = b.center();
    double dc = distance(c);
    double upper = dc;
    for (int m = 0; m < (1 << D); ++m) upper = std::min(upper, distance(b.corner(m)));
    return {std::max(0.0, dc - 0.5 * b.diam()), upper};
  }

  /// Certified test that the box lies inside F.
  bool box_inside(const Box<D>& b) const {
    if (is_empty || !depth) return false;
    return depth(b.center()) >= 0.5 * b.diam();
  }

  static SetOracle empty() {
    SetOracle s;
    s.is_empty = true;
    s.distance = [](const Point<D>&) { return kInf; };
    return s;
  }
};

using P2 = Point<2>;
using B2 = Box<2>;

inline double cross2(const P2& a, const P2& b) { return a[0] * b[1] - a[1] * b[0]; }

inline double point_segment_distance(const P2& p, const P2& a, const P2& b) {
  P2 ab = sub<2>(b, a), ap = sub<2>(p, a);
  double len2 = dot<2>(ab, ab);
  double t = len2 > 0.0 ? std::clamp(dot<2>(ap, ab) / len2, 0.0, 1.0) : 0.0;
  return distance<2>(p, add<2>(a, scale<2>(ab, t)));
}

/// Distance to the closed ray {a + t u : t >= 0}, u a unit vector.
inline double point_ray_distance(const P2& p, const P2& a, const P2& u) {
  P2 ap = sub<2>(p, a);
  double t = dot<2>(ap, u);
  if (t <= 0.0) return norm<2>(ap);
  return std::abs(cross2(u, ap));
}

inline bool segments_intersect(const P2& p1, const P2& p2, const P2& q1, const P2& q2) {
  auto orient = [](const P2& a, const P2& b, const P2& c) {
    double v = cross2(sub<2>(b, a), sub<2>(c, a));
    return (v > 0) - (v < 0);
  };
  auto on_seg = [](const P2& a, const P2& b, const P2& c) {
    return std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) &&
           std::min(a[1], b[1]) <= c[1] && c[1] <= std::max(a[1], b[1]);
  };
  int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_seg(p1, p2, q1)) return true;
  if (o2 == 0 && on_seg(p1, p2, q2)) return true;
  if (o3 == 0 && on_seg(q1, q2, p1)) return true;
  if (o4 == 0 && on_seg(q1, q2, p2)) return true;
  return false;
}

/// Exact distance between a closed box and a closed segment.
inline double box_segment_distance(const B2& b, const P2& a, const P2& c) {
  if (b.contains(a) || b.contains(c)) return 0.0;
  P2 k[4] = {b.corner(0), b.corner(1), b.corner(3), b.corner(2)};
  for (int i = 0; i < 4; ++i)
    if (segments_intersect(a, c, k[i], k[(i + 1) % 4])) return 0.0;
  double d = std::min(point_box_distance<2>(a, b), point_box_distance<2>(c, b));
  for (auto& q : k) d = std::min(d, point_segment_distance(q, a, c));
  return d;
}

/// Exact distance between a closed box and the closed ray a + t u, t >= 0.
inline double box_ray_distance(const B2& b, const P2& a, const P2& u) {
  // Clip the ray to a segment that reaches past the box.
  double reach = point_box_farthest<2>(a, b) + 1.0;
  return box_segment_distance(b, a, add<2>(a, scale<2>(u, reach)));
}

/// Nearest-point distance to a parametrized planar curve c(t), t in [t0, t1],
/// by a uniform scan followed by golden-section refinement.
struct CurveDistance {
  std::function<P2(double)> curve;
  int scan = 48;

  /// Parameter of the nearest curve point on [t0, t1].
  double foot(const P2& p, double t0, double t1) const {
    if (!(t1 > t0)) return t0;
    auto g = [&](double t) { return distance<2>(p, curve(t)); };
    double best_t = t0, best = g(t0);
    double h = (t1 - t0) / scan;
    for (int i = 1; i <= scan; ++i) {
      double t = t0 + i * h;
      double v = g(t);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    double a = std::max(t0, best_t - h), b = std::min(t1, best_t + h);
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 200 && b - a > 1e-13 * (1.0 + std::abs(a)); ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - r * (b - a);
        f1 = g(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + r * (b - a);
        f2 = g(x2);
      }
    }
    double mid = 0.5 * (a + b);
    double cand[4] = {best_t, x1, x2, mid};
    double t = best_t, v = best;
    for (double c : cand) {
      double gc = g(c);
      if (gc < v) v = gc, t = c;
    }
    return t;
  }

  double operator()(const P2& p, double t0, double t1) const { return distance<2>(p, curve(foot(p, t0, t1))); }
};

}  // namespace sobext
