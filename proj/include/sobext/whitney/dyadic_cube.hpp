#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>

#include "../core/vec.hpp"

namespace sobext {

/// Closed dyadic cube prod_i [a_i 2^-level, (a_i + 1) 2^-level].
template <int D>
struct DyadicCube {
  int level = 0;
  std::array<std::int64_t, D> anchor{};

  double side() const { return std::ldexp(1.0, -level); }
  double diam() const { return std::sqrt(double(D)) * side(); }
  double measure() const { return std::pow(side(), D); }

  Box<D> box() const {
    Box<D> b;
    double s = side();
    for (int i = 0; i < D; ++i) {
      b.lo[i] = double(anchor[i]) * s;
      b.hi[i] = double(anchor[i] + 1) * s;
    }
    return b;
  }

  Point<D> center() const { return box().center(); }

  DyadicCube parent() const {
    DyadicCube p{level - 1, {}};
    for (int i = 0; i < D; ++i) p.anchor[i] = anchor[i] >> 1;  // arithmetic shift floors negatives
    return p;
  }

  DyadicCube child(int mask) const {
    DyadicCube c{level + 1, {}};
    for (int i = 0; i < D; ++i) c.anchor[i] = 2 * anchor[i] + ((mask >> i) & 1);
    return c;
  }

  /// Integer extent [lo, hi] along axis i in units of 2^-L (L >= level).
  std::int64_t lo_at(int i, int L) const { return anchor[i] << (L - level); }
  std::int64_t hi_at(int i, int L) const { return (anchor[i] + 1) << (L - level); }

  friend bool operator==(const DyadicCube& a, const DyadicCube& b) {
    return a.level == b.level && a.anchor == b.anchor;
  }
  friend bool operator<(const DyadicCube& a, const DyadicCube& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.anchor < b.anchor;
  }
};

template <int D>
struct DyadicCubeHash {
  std::size_t operator()(const DyadicCube<D>& q) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ std::uint64_t(q.level + 1024);
    for (int i = 0; i < D; ++i) {
      h ^= std::uint64_t(q.anchor[i]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return std::size_t(h);
  }
};

/// Closed cubes share at least one point.
template <int D>
bool cubes_intersect(const DyadicCube<D>& a, const DyadicCube<D>& b) {
  int L = std::max(a.level, b.level);
  for (int i = 0; i < D; ++i)
    if (a.lo_at(i, L) > b.hi_at(i, L) || b.lo_at(i, L) > a.hi_at(i, L)) return false;
  return true;
}

/// A face of one cube lies in a face of the other: the closed cubes meet in a
/// set that is flat along exactly one axis.
template <int D>
bool cubes_touch(const DyadicCube<D>& a, const DyadicCube<D>& b) {
  int L = std::max(a.level, b.level);
  int flat = 0;
  for (int i = 0; i < D; ++i) {
    std::int64_t lo = std::max(a.lo_at(i, L), b.lo_at(i, L));
    std::int64_t hi = std::min(a.hi_at(i, L), b.hi_at(i, L));
    if (lo > hi) return false;
    if (lo == hi) ++flat;
  }
  return flat == 1;
}

/// a is contained in b.
template <int D>
bool cube_within(const DyadicCube<D>& a, const DyadicCube<D>& b) {
  if (a.level < b.level) return false;
  for (int i = 0; i < D; ++i)
    if ((a.anchor[i] >> (a.level - b.level)) != b.anchor[i]) return false;
  return true;
}

}  // namespace sobext
