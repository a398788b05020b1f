#pragma once

// Smooth bumps on exterior cubes and the partition of unity built from them.

#include <vector>

#include "../core/jet.hpp"
#include "../reflect/classify.hpp"

namespace sobext {

/// C^{n} smoothstep of degree 2n + 1: 0 for t <= 0, 1 for t >= 1.
class Ramp {
 public:
  explicit Ramp(int n = 2) : n_(n) {
    coeffs_.assign(2 * n + 2, 0.0);
    for (int j = 0; j <= n; ++j)
      coeffs_[n + j + 1] = (j % 2 ? -1.0 : 1.0) * binomial(n + j, j) * binomial(2 * n + 1, n - j);
  }

  int smoothness() const { return n_; }

  double operator()(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double s = 0.0;
    for (int i = int(coeffs_.size()) - 1; i >= 0; --i) s = s * t + coeffs_[i];
    return s;
  }

  template <int D>
  Jet<D> operator()(const Jet<D>& t) const {
    if (t.value() <= 0.0) return Jet<D>(0.0, t.order());
    if (t.value() >= 1.0) return Jet<D>(1.0, t.order());
    return polyval<D>(coeffs_, int(coeffs_.size()), t);
  }

 private:
  int n_;
  std::vector<double> coeffs_;
};

inline constexpr double kBumpOuter = 17.0 / 32;
inline constexpr double kBumpRampWidth = 1.0 / 16;

/// psi_j = prod_a beta((x_a - c_a) / side) with beta = 1 on |u| <= outer - 1/16
/// and 0 for |u| >= outer, on every cube of W(cl(Omega)^c); phi_j = psi_j / s
/// with s = sum over all cubes, so sum_j phi_j = 1 on the exterior. Only
/// the We terms are returned; the sum of those is 1 where every bump at x
/// belongs to a We cube.
template <int D>
class PartitionOfUnity {
 public:
  struct Term {
    int j;
    Jet<D> phi;
  };

  PartitionOfUnity() = default;
  PartitionOfUnity(WhitneyPtr<D> ext, std::vector<char> in_we, int k, double outer = kBumpOuter)
      : ext_(std::move(ext)), in_we_(std::move(in_we)), outer_(outer), ramp_(k + 1), k_(k) {}

  double outer() const { return outer_; }
  int k() const { return k_; }
  const Ramp& ramp() const { return ramp_; }

  /// Cubes whose open bump support contains x; x must lie in ext cube `q`.
  std::vector<int> candidates(const Point<D>& x, int q) const {
    std::vector<int> out;
    auto test = [&](int j) {
      const auto& Q = ext_->cubes[j];
      Point<D> c = Q.center();
      double s = Q.side();
      for (int a = 0; a < D; ++a)
        if (std::abs(x[a] - c[a]) >= outer_ * s) return;
      out.push_back(j);
    };
    test(q);
    ext_->for_each_intersecting(q, test);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Every bump at x belongs to a We cube.
  bool covered(const Point<D>& x, int q) const {
    auto c = candidates(x, q);
    return !c.empty() && std::all_of(c.begin(), c.end(), [&](int j) { return bool(in_we_[j]); });
  }

  Jet<D> psi(int j, const std::array<Jet<D>, D>& X) const {
    const auto& Q = ext_->cubes[j];
    Point<D> c = Q.center();
    double s = Q.side();
    int order = X[0].order();
    Jet<D> r(1.0, order);
    for (int a = 0; a < D; ++a) {
      Jet<D> u = (X[a] - Jet<D>(c[a], order)) * (1.0 / s);
      Jet<D> t = (Jet<D>(outer_, order) - abs(u)) * (1.0 / kBumpRampWidth);
      r = r * ramp_(t);
    }
    return r;
  }

  /// phi_j jets at x for the We cubes among the candidates; x in ext cube q.
  /// Empty when no bump reaches x.
  std::vector<Term> phis(const Point<D>& x, int q, int order) const {
    auto cand = candidates(x, q);
    std::vector<Term> out;
    auto X = Jet<D>::variables(x, order);
    Jet<D> s(0.0, order);
    std::vector<Jet<D>> ps;
    for (int j : cand) {
      ps.push_back(psi(j, X));
      s += ps.back();
    }
    if (s.value() <= 0.0) return out;
    Jet<D> inv = reciprocal(s);
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (in_we_[cand[i]]) out.push_back({cand[i], ps[i] * inv});
    return out;
  }

  /// Sum of psi_i over all cubes at x (values only).
  double psi_sum(const Point<D>& x, int q) const {
    auto X = Jet<D>::variables(x, 0);
    double s = 0.0;
    for (int j : candidates(x, q)) s += psi(j, X).value();
    return s;
  }

 private:
  WhitneyPtr<D> ext_;
  std::vector<char> in_we_;
  double outer_ = kBumpOuter;
  Ramp ramp_{2};
  int k_ = 1;
};

}  // namespace sobext
