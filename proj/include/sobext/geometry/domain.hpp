#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "../core/jet.hpp"
#include "oracles.hpp"

namespace sobext {

enum class OracleKind { Analytic, SampledBoundary };

enum class PointClass { Interior, Exterior, OnD, OnGamma };

enum class BoundaryPart { Gamma, D, Boundary };

inline const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::Interior: return "Interior";
    case PointClass::Exterior: return "Exterior";
    case PointClass::OnD: return "OnD";
    case PointClass::OnGamma: return "OnGamma";
  }
  return "?";
}

/// Constants (eps, delta, K, lambda) a domain claims for the epsilon-delta conditions.
struct ClaimedParams {
  double eps = 0.0;
  double delta = kInf;
  double K = 0.0;
  double lambda = 0.0;
};

/// A parametrized boundary piece c(t), t in [t0, t1], used for sampling and drawing.
template <int D>
struct BoundaryPiece {
  std::function<Point<D>(double)> at;
  double t0 = 0.0;
  double t1 = 1.0;
};

template <int D>
using JetField = std::function<Jet<D>(const std::array<Jet<D>, D>&)>;

/// Open set Omega with closed Dirichlet part D and Neumann part Gamma = boundary minus D.
template <int D>
struct Domain {
  std::string name;
  std::string params;
  Box<D> window;
  std::function<bool(const Point<D>&)> inside;
  SetOracle<D> boundary;  // distance to the full boundary
  SetOracle<D> gamma;     // distance to cl(Gamma)
  SetOracle<D> dset;      // distance to D
  SetOracle<D> closure;   // distance to cl(Omega), with depth
  OracleKind oracle = OracleKind::Analytic;
  double h_b = 0.0;
  std::optional<ClaimedParams> claimed;
  /// Optional analytic jet of dist(., D), used by the cutoff generator.
  JetField<D> dist_d_jet;
  std::vector<BoundaryPiece<D>> gamma_pieces;
  std::vector<BoundaryPiece<D>> d_pieces;

  double tol_b() const { return oracle == OracleKind::Analytic ? 1e-9 : h_b; }
  bool gamma_empty() const { return gamma.is_empty; }
  bool d_empty() const { return dset.is_empty; }
  double delta() const { return claimed ? claimed->delta : kInf; }
};

template <int D>
PointClass classify_point(const Domain<D>& dom, const Point<D>& p) {
  if (dom.inside(p)) return PointClass::Interior;
  double tol = dom.tol_b();
  if (dom.dset(p) <= tol) return PointClass::OnD;
  if (dom.gamma(p) <= tol) return PointClass::OnGamma;
  return PointClass::Exterior;
}

template <int D>
double dist_to_set(const Domain<D>& dom, const Point<D>& p, BoundaryPart which) {
  switch (which) {
    case BoundaryPart::Gamma: return dom.gamma(p);
    case BoundaryPart::D: return dom.dset(p);
    case BoundaryPart::Boundary: return dom.boundary(p);
  }
  return kInf;
}

/// Oracle for cl(Omega) derived from membership and boundary distance.
template <int D>
SetOracle<D> closure_oracle(std::function<bool(const Point<D>&)> inside, SetOracle<D> boundary) {
  SetOracle<D> s;
  s.distance = [inside, boundary](const Point<D>& p) { return inside(p) ? 0.0 : boundary(p); };
  s.depth = [inside, boundary](const Point<D>& p) { return inside(p) ? boundary(p) : 0.0; };
  return s;
}

/// Points along the pieces with consecutive spacing at most h.
template <int D>
std::vector<Point<D>> sample_pieces(const std::vector<BoundaryPiece<D>>& pieces, double h) {
  std::vector<Point<D>> out;
  for (const auto& pc : pieces) {
    double t = pc.t0;
    Point<D> prev = pc.at(t);
    out.push_back(prev);
    double dt = (pc.t1 - pc.t0) / 64.0;
    while (t < pc.t1) {
      double step = std::min(dt, pc.t1 - t);
      Point<D> q = pc.at(t + step);
      while (distance<D>(prev, q) > h && step > 1e-15) {
        step *= 0.5;
        q = pc.at(t + step);
      }
      t += step;
      prev = q;
      out.push_back(q);
      if (distance<D>(prev, pc.at(std::min(pc.t1, t + 2 * step))) <= h) dt = 2 * step;
      else dt = step;
    }
  }
  return out;
}

}  // namespace sobext
