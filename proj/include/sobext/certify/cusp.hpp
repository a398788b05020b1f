#pragma once

// Blow-up experiments for the two interior cusp counterexamples: a family f_r
// with controlled W^{1,p} norm whose extension must pay for a unit trace across
// a thin gap, giving a lower bound LB(r) on the operator norm.

#include <cmath>
#include <string>
#include <vector>

#include "../core/quadrature.hpp"
#include "../extend/lipschitz.hpp"
#include "../extend/partition.hpp"

namespace sobext {

/// 1D profile: 0 outside [a, d], 1 on [b, c], C^1 ramps between; a == b
/// starts at 1.
struct RampProfile {
  double a, b, c, d;

  Jet<1> operator()(double x) const {
    static const Ramp ramp(1);
    Jet<1> X = Jet<1>::variables({x}, 1)[0];
    if (x <= a || x >= d) return Jet<1>(0.0, 1);
    if (x < b) return ramp((X - Jet<1>(a, 1)) * (1.0 / (b - a)));
    if (x <= c) return Jet<1>(1.0, 1);
    return ramp((Jet<1>(d, 1) - X) * (1.0 / (d - c)));
  }

  /// (int |g|^p, int |g'|^p) by Gauss rules on each smooth piece.
  std::pair<double, double> lp_parts(double p, int n = 24) const {
    double s0 = 0.0, s1 = 0.0;
    const double cuts[] = {a, b, c, d};
    for (int i = 0; i < 3; ++i) {
      double lo = cuts[i], hi = cuts[i + 1];
      if (hi <= lo) continue;
      for_each_gauss_node<1>(Box<1>{{lo}, {hi}}, n, [&](const Point<1>& x, double w) {
        Jet<1> g = (*this)(x[0]);
        s0 += w * std::pow(std::abs(g.value()), p);
        s1 += w * std::pow(std::abs(g.coeff(1)), p);
      });
    }
    return {s0, s1};
  }
};

/// ||g(x) h(y)||_{W^{1,p}}^p of a tensor function.
inline double tensor_w1p_p(const RampProfile& g, const RampProfile& h, double p) {
  auto [g0, g1] = g.lp_parts(p);
  auto [h0, h1] = h.lp_parts(p);
  return g0 * h0 + g1 * h0 + g0 * h1;
}

struct BlowupRow {
  double r = 0.0;
  double fnorm_p = 0.0;   // ||f_r||_{W^{1,p}}^p
  double scaling = 0.0;   // the reference scale, r^2 + r^{2-p} at zero
  double lower_bound = 0.0;
};

struct BlowupTable {
  std::string geometry;
  double alpha = 0.0, p = 2.0;
  std::vector<BlowupRow> rows;
  double slope = 0.0;           // least-squares slope of log LB against log r
  double expected_slope = 0.0;
  double envelope = 0.0;        // max / min of fnorm_p / scaling
};

inline double conjugate_exponent(double p) { return p / (p - 1.0); }

inline std::vector<double> default_cusp_radii() {
  std::vector<double> r;
  for (int i = 3; i <= 8; ++i) r.push_back(std::ldexp(1.0, -i));
  return r;
}

inline void finish_table(BlowupTable& t) {
  std::vector<double> lx, ly;
  double lo = kInf, hi = 0.0;
  for (const auto& row : t.rows) {
    lx.push_back(std::log(row.r));
    ly.push_back(std::log(row.lower_bound));
    double q = row.fnorm_p / row.scaling;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  t.slope = lsq_slope(lx, ly);
  t.envelope = lo > 0 ? hi / lo : kInf;
}

/// Cusp at zero: f_r supported in Q_r = [r/2, 2r] x [0, r], 1 on
/// R_r = [3r/4, 3r/2] x [0, r/2]; LB(r) = (3r/4) / (r^{(alpha+1)/p'} ||f_r||).
inline BlowupTable cusp_blowup_experiment(double alpha, double p, const std::vector<double>& radii = default_cusp_radii()) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(ErrorKind::Usage, "cusp experiment needs p in (1, inf)");
  if (!(alpha >= 1.0)) throw Error(ErrorKind::Usage, "cusp experiment needs alpha >= 1");
  BlowupTable t;
  t.geometry = "cusp-zero";
  t.alpha = alpha;
  t.p = p;
  double pc = conjugate_exponent(p);
  t.expected_slope = -(alpha - 1.0) / pc;
  for (double r : radii) {
    RampProfile gx{r / 2, 3 * r / 4, 3 * r / 2, 2 * r};
    RampProfile gy{0.0, 0.0, r / 2, r};
    BlowupRow row;
    row.r = r;
    row.fnorm_p = tensor_w1p_p(gx, gy, p);
    row.scaling = r * r + std::pow(r, 2 - p);
    row.lower_bound = 0.75 * r / (std::pow(r, (alpha + 1) / pc) * std::pow(row.fnorm_p, 1 / p));
    t.rows.push_back(row);
  }
  finish_table(t);
  return t;
}

inline std::vector<double> default_infinity_scales() {
  std::vector<double> R;
  for (int m = 2; m <= 7; ++m) R.push_back(std::ldexp(1.0, m));
  return R;
}

/// Cusp at infinity, same argument with the gap x^{-alpha} at x ~ R: f_R
/// supported in [R/2, 2R] x [0, 1], 1 on [3R/4, 3R/2] x [0, 1/2];
/// LB(R) = (3R/4) / ((R^{1-alpha})^{1/p'} ||f_R||), growing like R^{alpha/p'}.
/// The table's scaling column is R (the area term).
inline BlowupTable cusp_infinity_experiment(double alpha, double p,
                                            const std::vector<double>& scales = default_infinity_scales()) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(ErrorKind::Usage, "cusp experiment needs p in (1, inf)");
  if (!(alpha > 0.0)) throw Error(ErrorKind::Usage, "cusp-at-infinity experiment needs alpha > 0");
  BlowupTable t;
  t.geometry = "cusp-infinity";
  t.alpha = alpha;
  t.p = p;
  double pc = conjugate_exponent(p);
  t.expected_slope = alpha / pc;
  for (double R : scales) {
    RampProfile gx{R / 2, 3 * R / 4, 3 * R / 2, 2 * R};
    RampProfile gy{0.0, 0.0, 0.5, 1.0};
    BlowupRow row;
    row.r = R;
    row.fnorm_p = tensor_w1p_p(gx, gy, p);
    row.scaling = R;
    row.lower_bound = 0.75 * R / (std::pow(R * std::pow(R, -alpha), 1 / pc) * std::pow(row.fnorm_p, 1 / p));
    t.rows.push_back(row);
  }
  finish_table(t);
  return t;
}

}  // namespace sobext
