#pragma once

// The built-in planar geometries: half-plane, pure Dirichlet disk, sector,
// interior cusps at zero and at infinity, and the exterior cusp ("horn").

#include <cmath>
#include <stdexcept>
#include <string>

#include "domain.hpp"

namespace sobext {

using Domain2 = Domain<2>;
using Jet2 = Jet<2>;
using JetPoint2 = std::array<Jet2, 2>;

enum class HalfPlaneSplit { NeumannLine, DirichletLine, MixedRay };

namespace detail {

inline B2 power_window(int m) { return B2::symmetric(std::ldexp(1.0, m)); }

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline SetOracle<2> line_oracle() {
  SetOracle<2> s;
  s.distance = [](const P2& p) { return std::abs(p[1]); };
  s.box_distance = [](const B2& b) {
    if (b.lo[1] <= 0.0 && b.hi[1] >= 0.0) return 0.0;
    return std::min(std::abs(b.lo[1]), std::abs(b.hi[1]));
  };
  return s;
}

inline SetOracle<2> ray_oracle(P2 a, P2 u) {
  SetOracle<2> s;
  s.distance = [a, u](const P2& p) { return point_ray_distance(p, a, u); };
  s.box_distance = [a, u](const B2& b) { return box_ray_distance(b, a, u); };
  return s;
}

inline SetOracle<2> min_oracle(SetOracle<2> a, SetOracle<2> b) {
  if (a.is_empty) return b;
  if (b.is_empty) return a;
  SetOracle<2> s;
  s.distance = [a, b](const P2& p) { return std::min(a(p), b(p)); };
  if (a.box_distance && b.box_distance)
    s.box_distance = [a, b](const B2& x) { return std::min(a.box_distance(x), b.box_distance(x)); };
  return s;
}

/// Closure of the lower half-plane {y <= 0}.
inline SetOracle<2> lower_half_closure() {
  SetOracle<2> s;
  s.distance = [](const P2& p) { return std::max(0.0, p[1]); };
  s.depth = [](const P2& p) { return std::max(0.0, -p[1]); };
  s.box_distance = [](const B2& b) { return std::max(0.0, b.lo[1]); };
  return s;
}

inline Jet2 ray_distance_jet(const JetPoint2& x, P2 a, P2 u) {
  Jet2 dx = x[0] - Jet2(a[0]), dy = x[1] - Jet2(a[1]);
  Jet2 t = dx * u[0] + dy * u[1];
  if (t.value() <= 0.0) return sqrt(dx * dx + dy * dy);
  return abs(dy * u[0] - dx * u[1]);
}

inline P2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline BoundaryPiece<2> ray_piece(P2 a, P2 u, double length) {
  return {[a, u](double t) { return add<2>(a, scale<2>(u, t)); }, 0.0, length};
}

}  // namespace detail

/// Omega = {y < 0}; the split decides which part of the line is Gamma.
inline Domain2 half_plane(HalfPlaneSplit split = HalfPlaneSplit::NeumannLine, int m = 3) {
  Domain2 d;
  d.window = detail::power_window(m);
  double reach = 3.0 * std::ldexp(1.0, m);
  d.inside = [](const P2& p) { return p[1] < 0.0; };
  d.boundary = detail::line_oracle();
  d.closure = detail::lower_half_closure();
  BoundaryPiece<2> line{[](double t) { return P2{t, 0.0}; }, -reach, reach};
  switch (split) {
    case HalfPlaneSplit::NeumannLine:
      d.name = "halfplane";
      d.params = "split=neumann";
      d.gamma = detail::line_oracle();
      d.dset = SetOracle<2>::empty();
      d.gamma_pieces = {line};
      break;
    case HalfPlaneSplit::DirichletLine:
      d.name = "halfplane";
      d.params = "split=dirichlet";
      d.gamma = SetOracle<2>::empty();
      d.dset = detail::line_oracle();
      d.dist_d_jet = [](const JetPoint2& x) { return abs(x[1]); };
      d.d_pieces = {line};
      break;
    case HalfPlaneSplit::MixedRay:
      d.name = "halfplane";
      d.params = "split=mixed";
      d.gamma = detail::ray_oracle({0, 0}, {1, 0});
      d.dset = detail::ray_oracle({0, 0}, {-1, 0});
      d.dist_d_jet = [](const JetPoint2& x) {
        return detail::ray_distance_jet(x, {0, 0}, {-1, 0});
      };
      d.gamma_pieces = {detail::ray_piece({0, 0}, {1, 0}, reach)};
      d.d_pieces = {detail::ray_piece({0, 0}, {-1, 0}, reach)};
      break;
  }
  d.params += " m=" + std::to_string(m);
  return d;
}

/// Disk of radius r about the origin with D = boundary (Gamma empty).
inline Domain2 dirichlet_disk(double r = 1.0, int m = 1) {
  Domain2 d;
  d.name = "dirichlet-disk";
  d.params = detail::fmt("radius=%.10g", r) + " m=" + std::to_string(m);
  d.window = detail::power_window(m);
  d.inside = [r](const P2& p) { return norm<2>(p) < r; };
  SetOracle<2> circle;
  circle.distance = [r](const P2& p) { return std::abs(norm<2>(p) - r); };
  circle.box_distance = [r](const B2& b) {
    P2 o{0, 0};
    double near = point_box_distance<2>(o, b), far = point_box_farthest<2>(o, b);
    if (near <= r && r <= far) return 0.0;
    return std::min(std::abs(near - r), std::abs(far - r));
  };
  d.boundary = circle;
  d.dset = circle;
  d.gamma = SetOracle<2>::empty();
  d.closure.distance = [r](const P2& p) { return std::max(0.0, norm<2>(p) - r); };
  d.closure.depth = [r](const P2& p) { return std::max(0.0, r - norm<2>(p)); };
  d.closure.box_distance = [r](const B2& b) {
    return std::max(0.0, point_box_distance<2>({0, 0}, b) - r);
  };
  d.dist_d_jet = [r](const JetPoint2& x) { return abs(sqrt(x[0] * x[0] + x[1] * x[1]) - Jet2(r)); };
  d.d_pieces = {{[r](double t) { return P2{r * std::cos(t), r * std::sin(t)}; }, 0.0, 2 * kPi}};
  d.claimed = ClaimedParams{1.0, kInf, 0.0, 0.0};
  return d;
}

/// Outer shape of the sector example outside the sector.
struct SectorOuter {
  enum Kind { HalfPlane, Wedge } kind = HalfPlane;
  /// Opening of the removed closed wedge {0 <= angle <= phi0} when kind == Wedge.
  double phi0 = 0.0;
};

/// Omega coincides with the lower half-plane inside the open sector of
/// half-opening theta about the positive x-axis; Gamma = (0, inf) x {0}.
inline Domain2 sector(double theta, SectorOuter outer = {}, int m = 3) {
  Domain2 d;
  d.name = "sector";
  d.window = detail::power_window(m);
  double reach = 3.0 * std::ldexp(1.0, m);
  d.gamma = detail::ray_oracle({0, 0}, {1, 0});
  d.gamma_pieces = {detail::ray_piece({0, 0}, {1, 0}, reach)};
  d.claimed = ClaimedParams{0.0, kInf, 2.0 * (2.0 + 1.0 / std::tan(theta)), 0.0};
  if (outer.kind == SectorOuter::HalfPlane) {
    d.params = detail::fmt("theta=%.10g outer=halfplane", theta);
    d.inside = [](const P2& p) { return p[1] < 0.0; };
    d.boundary = detail::line_oracle();
    d.dset = detail::ray_oracle({0, 0}, {-1, 0});
    d.closure = detail::lower_half_closure();
    d.dist_d_jet = [](const JetPoint2& x) { return detail::ray_distance_jet(x, {0, 0}, {-1, 0}); };
    d.d_pieces = {detail::ray_piece({0, 0}, {-1, 0}, reach)};
  } else {
    double phi0 = outer.phi0;
    if (phi0 < theta || phi0 > kPi) throw std::invalid_argument("sector: wedge angle must lie in [theta, pi]");
    d.params = detail::fmt("theta=%.10g", theta) + detail::fmt(" outer=wedge phi0=%.10g", phi0);
    P2 u = detail::unit(phi0);
    auto in_closed_wedge = [phi0](const P2& p) {
      if (p[0] == 0.0 && p[1] == 0.0) return true;
      double a = std::atan2(p[1], p[0]);
      return a >= 0.0 && a <= phi0;
    };
    d.inside = [in_closed_wedge](const P2& p) { return !in_closed_wedge(p); };
    d.dset = detail::ray_oracle({0, 0}, u);
    d.boundary = detail::min_oracle(d.gamma, d.dset);
    d.closure = closure_oracle<2>(d.inside, d.boundary);
    auto bnd = d.boundary;
    auto inside = d.inside;
    d.closure.box_distance = [bnd, inside](const B2& b) {
      for (int k = 0; k < 4; ++k)
        if (inside(b.corner(k)) || bnd(b.corner(k)) == 0.0) return 0.0;
      return bnd.box_distance(b);
    };
    d.dist_d_jet = [u](const JetPoint2& x) { return detail::ray_distance_jet(x, {0, 0}, u); };
    d.d_pieces = {detail::ray_piece({0, 0}, u, reach)};
  }
  d.params += " m=" + std::to_string(m);
  return d;
}

/// Omega_Gamma of the horn example: the complement of the closed upper half-sector.
inline Domain2 wedge_complement(double theta, int m = 3) {
  Domain2 d = sector(theta, {SectorOuter::Wedge, theta}, m);
  d.name = "wedge-complement";
  d.claimed = ClaimedParams{0.0, kInf, 0.0, 0.0};
  return d;
}

namespace detail {

/// Distance to the curve y = -x^alpha, x >= 0.
inline double cusp_curve_distance(const P2& p, double alpha) {
  CurveDistance cd{[alpha](double t) { return P2{t, -std::pow(t, alpha)}; }};
  double r0 = norm<2>(p);
  return cd(p, std::max(0.0, p[0] - r0), std::max(0.0, p[0] + r0));
}

/// Jet of the distance to the curve {(t, -t^alpha) : t >= 0}: the foot point
/// is found numerically and then refined by Newton steps in jet arithmetic.
inline Jet2 cusp_distance_jet(const JetPoint2& X, double alpha) {
  P2 p{X[0].value(), X[1].value()};
  CurveDistance cd{[alpha](double t) { return P2{t, -std::pow(t, alpha)}; }};
  double r0 = norm<2>(p);
  double t = cd.foot(p, std::max(0.0, p[0] - r0), std::max(0.0, p[0] + r0));
  int order = X[0].order();
  if (t <= 1e-12) return sqrt(X[0] * X[0] + X[1] * X[1]);
  Jet2 T(t, order);
  for (int it = 0; it <= order + 2; ++it) {
    Jet2 ta1 = pow(T, alpha - 1.0), ta = ta1 * T;
    Jet2 F = (X[0] - T) - alpha * ta1 * (X[1] + ta);
    Jet2 Ft = Jet2(-1.0, order) - alpha * (alpha - 1.0) * pow(T, alpha - 2.0) * (X[1] + ta) - alpha * alpha * ta1 * ta1;
    T = T - F / Ft;
  }
  Jet2 dx = X[0] - T, dy = X[1] + pow(T, alpha);
  return sqrt(dx * dx + dy * dy);
}

inline SetOracle<2> cusp_curve_oracle(double alpha) {
  SetOracle<2> s;
  s.distance = [alpha](const P2& p) { return cusp_curve_distance(p, alpha); };
  return s;
}

inline double curve_reach(double window_half, double alpha) {
  return std::min(3.0 * window_half, std::pow(3.0 * window_half, 1.0 / alpha));
}

}  // namespace detail

/// Omega = R^2 minus the cusp {x >= 0, -x^alpha <= y <= 0}, alpha > 1.
inline Domain2 cusp_at_zero(double alpha, int m = 3) {
  Domain2 d;
  d.name = "cusp-zero";
  d.params = detail::fmt("alpha=%.10g", alpha) + " m=" + std::to_string(m);
  d.window = detail::power_window(m);
  double half = std::ldexp(1.0, m);
  d.inside = [alpha](const P2& p) {
    return !(p[0] >= 0.0 && p[1] <= 0.0 && p[1] >= -std::pow(p[0], alpha));
  };
  d.gamma = detail::ray_oracle({0, 0}, {1, 0});
  d.dset = detail::cusp_curve_oracle(alpha);
  d.dist_d_jet = [alpha](const JetPoint2& x) { return detail::cusp_distance_jet(x, alpha); };
  d.boundary = detail::min_oracle(d.gamma, d.dset);
  d.closure = closure_oracle<2>(d.inside, d.boundary);
  d.gamma_pieces = {detail::ray_piece({0, 0}, {1, 0}, 3 * half)};
  d.d_pieces = {{[alpha](double t) { return P2{t, -std::pow(t, alpha)}; }, 0.0,
                 detail::curve_reach(half, alpha)}};
  return d;
}

/// Omega = {y > 0} union {x > 0, y < -x^(-alpha)}; Gamma = R x {0}.
inline Domain2 cusp_at_infinity(double alpha, int m = 3) {
  Domain2 d;
  d.name = "cusp-infinity";
  d.params = detail::fmt("alpha=%.10g", alpha) + " m=" + std::to_string(m);
  d.window = detail::power_window(m);
  double half = std::ldexp(1.0, m);
  d.inside = [alpha](const P2& p) {
    return p[1] > 0.0 || (p[0] > 0.0 && p[1] < -std::pow(p[0], -alpha));
  };
  d.gamma = detail::line_oracle();
  SetOracle<2> curve;
  curve.distance = [alpha](const P2& p) {
    // c(s) = (e^s, -e^(-alpha s)); restrict s to where the curve can beat a reference point.
    CurveDistance cd{[alpha](double s) { return P2{std::exp(s), -std::exp(-alpha * s)}; }, 96};
    double tref = std::max(p[0], 1.0);
    double r0 = distance<2>(p, {tref, -std::pow(tref, -alpha)});
    double tmin = std::max(p[0] - r0, std::pow(std::abs(p[1]) + r0, -1.0 / alpha));
    double tmax = p[0] + r0;
    if (tmax <= 0.0) return r0;
    tmin = std::max(tmin, 1e-300);
    return std::min(r0, cd(p, std::log(tmin), std::log(tmax)));
  };
  d.dset = curve;
  d.boundary = detail::min_oracle(d.gamma, d.dset);
  d.closure = closure_oracle<2>(d.inside, d.boundary);
  double reach = 3.0 * half;
  d.gamma_pieces = {{[](double t) { return P2{t, 0.0}; }, -reach, reach}};
  d.d_pieces = {{[alpha](double s) { return P2{std::exp(s), -std::exp(-alpha * s)}; },
                 -std::log(reach) / alpha, std::log(reach)}};
  return d;
}

/// The horn {x > 0, -x^alpha < y < 0}: an exterior cusp at zero whose upper
/// side is Gamma = (0, inf) x {0}; the upper half-sector T_theta lies outside.
inline Domain2 exterior_cusp(double theta, double alpha = 2.0, int m = 3) {
  Domain2 d;
  d.name = "exterior-cusp";
  d.params = detail::fmt("theta=%.10g", theta) + detail::fmt(" alpha=%.10g", alpha) + " m=" +
             std::to_string(m);
  d.window = detail::power_window(m);
  double half = std::ldexp(1.0, m);
  d.inside = [alpha](const P2& p) {
    return p[0] > 0.0 && p[1] < 0.0 && p[1] > -std::pow(p[0], alpha);
  };
  d.gamma = detail::ray_oracle({0, 0}, {1, 0});
  d.dset = detail::cusp_curve_oracle(alpha);
  d.dist_d_jet = [alpha](const JetPoint2& x) { return detail::cusp_distance_jet(x, alpha); };
  d.boundary = detail::min_oracle(d.gamma, d.dset);
  d.closure = closure_oracle<2>(d.inside, d.boundary);
  d.gamma_pieces = {detail::ray_piece({0, 0}, {1, 0}, 3 * half)};
  d.d_pieces = {{[alpha](double t) { return P2{t, -std::pow(t, alpha)}; }, 0.0,
                 detail::curve_reach(half, alpha)}};
  return d;
}

}  // namespace sobext
