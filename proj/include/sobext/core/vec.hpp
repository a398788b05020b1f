#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace sobext {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

template <int D>
using Point = std::array<double, D>;

template <int D>
inline Point<D> add(const Point<D>& a, const Point<D>& b) {
  Point<D> r;
  for (int i = 0; i < D; ++i) r[i] = a[i] + b[i];
  return r;
}

template <int D>
inline Point<D> sub(const Point<D>& a, const Point<D>& b) {
  Point<D> r;
  for (int i = 0; i < D; ++i) r[i] = a[i] - b[i];
  return r;
}

template <int D>
inline Point<D> scale(const Point<D>& a, double s) {
  Point<D> r;
  for (int i = 0; i < D; ++i) r[i] = a[i] * s;
  return r;
}

template <int D>
inline double dot(const Point<D>& a, const Point<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) s += a[i] * b[i];
  return s;
}

template <int D>
inline double norm(const Point<D>& a) {
  return std::sqrt(dot<D>(a, a));
}

template <int D>
inline double distance(const Point<D>& a, const Point<D>& b) {
  return norm<D>(sub<D>(a, b));
}

/// Closed axis-parallel box.
template <int D>
struct Box {
  Point<D> lo{};
  Point<D> hi{};

  double extent(int i) const { return hi[i] - lo[i]; }

  double measure() const {
    double m = 1.0;
    for (int i = 0; i < D; ++i) m *= extent(i);
    return m;
  }

  double diam() const {
    double s = 0.0;
    for (int i = 0; i < D; ++i) s += extent(i) * extent(i);
    return std::sqrt(s);
  }

  Point<D> center() const {
    Point<D> c;
    for (int i = 0; i < D; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
  }

  bool contains(const Point<D>& p) const {
    for (int i = 0; i < D; ++i)
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    return true;
  }

  bool contains(const Box& b) const {
    for (int i = 0; i < D; ++i)
      if (b.lo[i] < lo[i] || b.hi[i] > hi[i]) return false;
    return true;
  }

  Box expanded(double r) const {
    Box b = *this;
    for (int i = 0; i < D; ++i) {
      b.lo[i] -= r;
      b.hi[i] += r;
    }
    return b;
  }

  /// Box scaled by factor s about its center.
  Box dilated(double s) const {
    Box b;
    Point<D> c = center();
    for (int i = 0; i < D; ++i) {
      b.lo[i] = c[i] - 0.5 * s * extent(i);
      b.hi[i] = c[i] + 0.5 * s * extent(i);
    }
    return b;
  }

  /// Corner number `mask` (bit i selects hi along axis i).
  Point<D> corner(int mask) const {
    Point<D> p;
    for (int i = 0; i < D; ++i) p[i] = (mask >> i & 1) ? hi[i] : lo[i];
    return p;
  }

  static Box cube(const Point<D>& center, double half) {
    Box b;
    for (int i = 0; i < D; ++i) {
      b.lo[i] = center[i] - half;
      b.hi[i] = center[i] + half;
    }
    return b;
  }

  static Box symmetric(double half) {
    Point<D> z{};
    return cube(z, half);
  }
};

template <int D>
inline double point_box_distance(const Point<D>& p, const Box<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) {
    double g = std::max({b.lo[i] - p[i], 0.0, p[i] - b.hi[i]});
    s += g * g;
  }
  return std::sqrt(s);
}

/// Largest distance from p to a point of b.
template <int D>
inline double point_box_farthest(const Point<D>& p, const Box<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) {
    double g = std::max(std::abs(p[i] - b.lo[i]), std::abs(p[i] - b.hi[i]));
    s += g * g;
  }
  return std::sqrt(s);
}

template <int D>
inline double box_box_distance(const Box<D>& a, const Box<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) {
    double g = std::max({a.lo[i] - b.hi[i], 0.0, b.lo[i] - a.hi[i]});
    s += g * g;
  }
  return std::sqrt(s);
}

template <int D>
inline bool boxes_intersect(const Box<D>& a, const Box<D>& b) {
  for (int i = 0; i < D; ++i)
    if (a.hi[i] < b.lo[i] || b.hi[i] < a.lo[i]) return false;
  return true;
}

template <int D>
inline std::string to_string(const Point<D>& p) {
  std::string s = "(";
  for (int i = 0; i < D; ++i) {
    if (i) s += ", ";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", p[i]);
    s += buf;
  }
  return s + ")";
}

}  // namespace sobext
