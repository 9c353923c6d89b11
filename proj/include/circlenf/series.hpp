// Truncated power series: one radial variable (u = |z|^2 or t) and the
// bivariate (z, zbar) ring with total-degree truncation.
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "circlenf/precision.hpp"

namespace circlenf {

namespace detail {
inline void check_match(int oa, int ob, int ba, int bb, const char* who) {
  if (oa != ob) throw Error("series", "order_mismatch", std::string(who) + ": order mismatch");
  if (ba != bb) throw Error("series", "precision_mismatch", std::string(who) + ": precision mismatch");
}
inline Complex zero_c(int bits) { return Complex(bits); }
inline Real zero_r(int bits) { return Real(bits); }
inline Real abs_of(const Real& x) { return abs(x); }
inline Real abs_of(const Complex& x) { return x.abs(); }
}  // namespace detail

// One-variable truncated series; T is Real (RadialSeries) or Complex.
template <class T>
class Series1 {
 public:
  Series1(int order, int bits) : order_(order), bits_(bits), c_(order + 1, make_zero()) {
    if (order < 0) throw Error("series", "bad_order", "negative order");
  }

  int order() const { return order_; }
  int bits() const { return bits_; }
  const T& operator[](int s) const { return c_[s]; }
  T& operator[](int s) { return c_[s]; }

  bool is_zero() const {
    for (auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }
  // index of first nonzero coefficient above tol, or -1
  int valuation(const Real& tol) const {
    for (int s = 0; s <= order_; ++s)
      if (detail::abs_of(c_[s]) > tol) return s;
    return -1;
  }

  friend Series1 operator+(const Series1& a, const Series1& b) {
    detail::check_match(a.order_, b.order_, a.bits_, b.bits_, "add");
    Series1 r(a.order_, a.bits_);
    for (int s = 0; s <= a.order_; ++s) r.c_[s] = a.c_[s] + b.c_[s];
    return r;
  }
  friend Series1 operator-(const Series1& a, const Series1& b) {
    detail::check_match(a.order_, b.order_, a.bits_, b.bits_, "sub");
    Series1 r(a.order_, a.bits_);
    for (int s = 0; s <= a.order_; ++s) r.c_[s] = a.c_[s] - b.c_[s];
    return r;
  }
  friend Series1 operator*(const Series1& a, const Series1& b) {
    detail::check_match(a.order_, b.order_, a.bits_, b.bits_, "mul");
    Series1 r(a.order_, a.bits_);
    for (int i = 0; i <= a.order_; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (int j = 0; i + j <= a.order_; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }
  Series1 scaled(const T& s) const {
    Series1 r(order_, bits_);
    for (int i = 0; i <= order_; ++i) r.c_[i] = c_[i] * s;
    return r;
  }

  // a(b(x)) for b with zero constant term.
  Series1 compose(const Series1& b) const {
    detail::check_match(order_, b.order_, bits_, b.bits_, "compose");
    if (!b.c_[0].is_zero())
      throw Error("series", "nonzero_constant", "compose: inner series has constant term");
    Series1 r(order_, bits_);
    Series1 p(order_, bits_);  // b^k
    p.c_[0] = make_one();
    r.c_[0] = c_[0];
    for (int k = 1; k <= order_; ++k) {
      p = p * b;
      for (int s = 0; s <= order_; ++s) r.c_[s] += c_[k] * p.c_[s];
    }
    return r;
  }

  T eval(const T& x) const {  // Horner
    T acc = c_[order_];
    for (int s = order_ - 1; s >= 0; --s) acc = acc * x + c_[s];
    return acc;
  }

  Series1 truncated(int new_order) const {
    Series1 r(new_order, bits_);
    for (int s = 0; s <= std::min(order_, new_order); ++s) r.c_[s] = c_[s];
    return r;
  }

  Real max_abs() const {
    Real m(bits_);
    for (auto& x : c_) {
      Real a = detail::abs_of(x);
      if (a > m) m = a;
    }
    return m;
  }

 private:
  T make_zero() const {
    if constexpr (std::is_same_v<T, Real>) return Real(bits_);
    else return Complex(bits_);
  }
  T make_one() const {
    if constexpr (std::is_same_v<T, Real>) return Real(1.0, bits_);
    else return Complex(1.0, 0.0, bits_);
  }
  int order_;
  int bits_;
  std::vector<T> c_;
};

using RadialSeries = Series1<Real>;   // real coefficients, variable u = |z|^2
using ComplexSeries = Series1<Complex>;

RadialSeries radial_from(std::initializer_list<double> coeffs, int order, int bits);
ComplexSeries to_complex(const RadialSeries& a);
RadialSeries real_part(const ComplexSeries& a, Real* imag_residue = nullptr);

// log(1+s), exp(s), (1+s)^alpha - 1 for zero-constant s: shared radial helpers.
RadialSeries log1p_series(const RadialSeries& s);
RadialSeries expm1_series(const RadialSeries& s);
RadialSeries pow1p_series(const RadialSeries& s, const Real& alpha);  // (1+s)^alpha - 1

// rho with  u(1+a(u))^2  ∘  u(1+rho(u))  =  u  (to truncation order).
RadialSeries radial_reversion(const RadialSeries& a);

// Truncated series in (z, zbar), dense over the triangle j+k <= N.
class BiSeries {
 public:
  BiSeries(int order, int bits, bool real_valued = false);

  int order() const { return order_; }
  int bits() const { return bits_; }
  bool real_flag() const { return real_valued_; }
  void set_real_flag(bool f) { real_valued_ = f; }

  const Complex& at(int j, int k) const { return c_[idx(j, k)]; }
  Complex& at(int j, int k) { return c_[idx(j, k)]; }

  static BiSeries monomial(int j, int k, const Complex& v, int order, int bits);

  friend BiSeries operator+(const BiSeries& a, const BiSeries& b);
  friend BiSeries operator-(const BiSeries& a, const BiSeries& b);
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b);
  BiSeries scaled(const Complex& s) const;
  BiSeries scaled(const Real& s) const;

  BiSeries conj_flip() const;  // c'_{jk} = conj(c_{kj})
  // Enforce c_{kj} = conj(c_{jk}); returns the max asymmetry that was removed.
  Real symmetrize();
  Real asymmetry() const;

  // exp(2*pi*i*this); requires zero constant term.
  BiSeries exp_2pii() const;
  // substitution of (F, Fbar) into the (z, zbar) slots; both zero at origin.
  BiSeries substitute(const BiSeries& F, const BiSeries& Fbar) const;
  // diagonal (p,p) -> u^p, plus the off-diagonal remainder
  std::pair<RadialSeries, BiSeries> resonant_part() const;
  ComplexSeries holomorphic_part() const;  // c_{j0} z^j

  // multiply by a radial series (diagonal embedding), truncated
  BiSeries mul_radial(const ComplexSeries& p) const;
  // multiply by the monomial z^j zbar^k (shift), truncated
  BiSeries shifted(int j, int k) const;

  BiSeries truncated(int new_order) const;

  Complex eval(const Complex& z) const;                    // zbar := conj(z)
  Complex eval2(const Complex& z, const Complex& w) const; // independent slots

  Real max_abs() const;
  Real max_abs_at_degree(int deg) const;
  bool is_zero() const;

 private:
  int idx(int j, int k) const;
  int order_;
  int bits_;
  bool real_valued_;
  std::vector<Complex> c_;
};

}  // namespace circlenf
