#pragma once

// Truncated multivariate Taylor polynomials ("jets") for exact derivatives
// of composed analytic expressions up to a fixed total order.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "vec.hpp"

namespace sobext {

inline constexpr int kMaxJetOrder = 5;

constexpr int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

template <int D>
using MultiIndex = std::array<int, D>;

template <int D>
inline int degree(const MultiIndex<D>& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

/// Graded enumeration of multi-indices with |a| <= kMaxJetOrder and the
/// product table used by Jet multiplication.
template <int D>
struct JetTable {
  static constexpr int kCap = binomial(kMaxJetOrder + D, D);

  std::array<MultiIndex<D>, kCap> alpha{};
  std::array<int, kCap> deg{};
  std::array<double, kCap> factorial{};  // alpha!
  std::array<int, kMaxJetOrder + 1> count{};
  std::array<std::array<std::int16_t, kCap>, kCap> sum{};

  static const JetTable& get() {
    static const JetTable table;
    return table;
  }

  int index(const MultiIndex<D>& a) const {
    for (int i = 0; i < kCap; ++i)
      if (alpha[i] == a) return i;
    return -1;
  }

 private:
  JetTable() {
    int n = 0;
    for (int d = 0; d <= kMaxJetOrder; ++d) {
      MultiIndex<D> a{};
      enumerate(a, 0, d, n);
      count[d] = n;
    }
    for (int i = 0; i < kCap; ++i) {
      double f = 1.0;
      for (int v : alpha[i])
        for (int t = 2; t <= v; ++t) f *= t;
      factorial[i] = f;
    }
    for (int i = 0; i < kCap; ++i) {
      for (int j = 0; j < kCap; ++j) {
        MultiIndex<D> s;
        for (int q = 0; q < D; ++q) s[q] = alpha[i][q] + alpha[j][q];
        sum[i][j] = static_cast<std::int16_t>(degree<D>(s) <= kMaxJetOrder ? index(s) : -1);
      }
    }
  }

  // Lexicographically descending enumeration of all indices of degree d.
  void enumerate(MultiIndex<D>& a, int axis, int remaining, int& n) {
    if (axis == D - 1) {
      a[axis] = remaining;
      alpha[n] = a;
      deg[n] = degree<D>(a);
      ++n;
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      a[axis] = v;
      enumerate(a, axis + 1, remaining - v, n);
    }
  }
};

template <int D>
class Jet {
 public:
  static constexpr int kCap = JetTable<D>::kCap;

  Jet() = default;
  Jet(double value) { c_[0] = value; }  // NOLINT: constants convert implicitly
  Jet(double value, int order) : order_(order) {
    check_order(order);
    c_[0] = value;
  }

  /// The coordinate function x_axis expanded at `value`.
  static Jet variable(double value, int axis, int order) {
    Jet j(value, order);
    if (order >= 1) {
      MultiIndex<D> e{};
      e[axis] = 1;
      j.c_[JetTable<D>::get().index(e)] = 1.0;
    }
    return j;
  }

  static std::array<Jet, D> variables(const Point<D>& p, int order) {
    std::array<Jet, D> x;
    for (int i = 0; i < D; ++i) x[i] = variable(p[i], i, order);
    return x;
  }

  int order() const { return order_; }
  int size() const { return JetTable<D>::get().count[order_]; }
  double value() const { return c_[0]; }
  double coeff(int i) const { return c_[i]; }
  double& coeff(int i) { return c_[i]; }

  /// Partial derivative d^a at the expansion point (zero beyond the order).
  double derivative(const MultiIndex<D>& a) const {
    if (degree<D>(a) > order_) return 0.0;
    const auto& t = JetTable<D>::get();
    int i = t.index(a);
    return c_[i] * t.factorial[i];
  }

  /// Same as derivative() addressed by enumeration index.
  double derivative_at(int i) const { return c_[i] * JetTable<D>::get().factorial[i]; }

  Jet with_order(int order) const {
    check_order(order);
    Jet r = *this;
    const auto& t = JetTable<D>::get();
    for (int i = t.count[std::min(order, order_)]; i < kCap; ++i) r.c_[i] = 0.0;
    r.order_ = order;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    order_ = std::max(order_, o.order_);
    int n = size();
    for (int i = 0; i < n; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    order_ = std::max(order_, o.order_);
    int n = size();
    for (int i = 0; i < n; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    int n = size();
    for (int i = 0; i < n; ++i) c_[i] *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.order_ = std::max(a.order_, b.order_);
    const auto& t = JetTable<D>::get();
    if (a.order_ == 0) return b * a.c_[0];
    if (b.order_ == 0) return a * b.c_[0];
    int n = t.count[r.order_];
    for (int i = 0; i < n; ++i) {
      if (a.c_[i] == 0.0) continue;
      int m = t.count[r.order_ - t.deg[i]];
      for (int j = 0; j < m; ++j) r.c_[t.sum[i][j]] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  /// g(x) given g and its derivatives g^(i)(x0), i = 0..order, at x0 = x.value().
  Jet compose(const double* derivs) const {
    Jet h = *this;
    h.c_[0] = 0.0;
    Jet r(0.0, order_);
    double fact = 1.0;
    for (int i = 1; i <= order_; ++i) fact *= i;
    r.c_[0] = derivs[order_] / fact;
    for (int i = order_ - 1; i >= 0; --i) {
      fact /= (i + 1);
      r = r * h;
      r.order_ = order_;
      r.c_[0] += derivs[i] / fact;
    }
    return r;
  }

  friend Jet reciprocal(const Jet& x) {
    double v = x.value();
    double d[kMaxJetOrder + 1];
    double p = 1.0 / v;
    for (int i = 0; i <= x.order_; ++i) {
      d[i] = p;
      p *= -(i + 1) / v;
    }
    return x.compose(d);
  }

 private:
  static void check_order(int order) {
    if (order < 0 || order > kMaxJetOrder) throw std::out_of_range("jet order out of range");
  }

  int order_ = 0;
  std::array<double, kCap> c_{};
};

template <int D>
Jet<D> sin(const Jet<D>& x) {
  double s = std::sin(x.value()), c = std::cos(x.value());
  double d[kMaxJetOrder + 1];
  const double cyc[4] = {s, c, -s, -c};
  for (int i = 0; i <= x.order(); ++i) d[i] = cyc[i % 4];
  return x.compose(d);
}

template <int D>
Jet<D> cos(const Jet<D>& x) {
  double s = std::sin(x.value()), c = std::cos(x.value());
  double d[kMaxJetOrder + 1];
  const double cyc[4] = {c, -s, -c, s};
  for (int i = 0; i <= x.order(); ++i) d[i] = cyc[i % 4];
  return x.compose(d);
}

template <int D>
Jet<D> exp(const Jet<D>& x) {
  double e = std::exp(x.value());
  double d[kMaxJetOrder + 1];
  for (int i = 0; i <= x.order(); ++i) d[i] = e;
  return x.compose(d);
}

template <int D>
Jet<D> log(const Jet<D>& x) {
  double v = x.value();
  double d[kMaxJetOrder + 1];
  d[0] = std::log(v);
  double p = 1.0 / v;
  for (int i = 1; i <= x.order(); ++i) {
    d[i] = p;
    p *= -i / v;
  }
  return x.compose(d);
}

/// x^e for real e (x > 0 unless e is a nonnegative integer).
template <int D>
Jet<D> pow(const Jet<D>& x, double e) {
  double v = x.value();
  double d[kMaxJetOrder + 1];
  double coef = 1.0;
  for (int i = 0; i <= x.order(); ++i) {
    double ex = e - i;
    d[i] = (coef == 0.0) ? 0.0 : coef * std::pow(v, ex);
    coef *= ex;
  }
  return x.compose(d);
}

template <int D>
Jet<D> sqrt(const Jet<D>& x) {
  return pow(x, 0.5);
}

/// |x| expanded on the side of the value's sign (derivative taken as +1 at 0).
template <int D>
Jet<D> abs(const Jet<D>& x) {
  return x.value() < 0.0 ? -x : x;
}

/// Polynomial sum_i a[i] t^i evaluated on a jet by Horner's rule.
template <int D, class Coeffs>
Jet<D> polyval(const Coeffs& a, int n, const Jet<D>& t) {
  Jet<D> r(a[n - 1], t.order());
  for (int i = n - 2; i >= 0; --i) {
    r = r * t;
    r += Jet<D>(a[i]);
  }
  return r;
}

}  // namespace sobext
