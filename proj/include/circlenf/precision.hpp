// Arbitrary-precision real/complex scalars over MPFR, plus the error type
// shared by every module.
#pragma once

#include <mpfr.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace circlenf {

// Module-qualified failure; the CLI renders these as {"code","module","message"}.
struct Error : std::runtime_error {
  std::string module;
  std::string code;
  Error(std::string mod, std::string c, const std::string& msg)
      : std::runtime_error(msg), module(std::move(mod)), code(std::move(c)) {}
};

struct Precision {
  int bits = 256;
  explicit Precision(int b = 256) : bits(b) {
    if (b < 64) throw Error("series", "precision_too_low", "precision must be >= 64 bits");
  }
};

class Real {
 public:
  explicit Real(int bits = 64) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Real(double x, int bits) { mpfr_init2(v_, bits); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(long x, int bits) { mpfr_init2(v_, bits); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(const std::string& s, int bits) {
    mpfr_init2(v_, bits);
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw Error("series", "bad_decimal", "cannot parse decimal: " + s);
  }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Real() { mpfr_clear(v_); }

  int prec() const { return static_cast<int>(mpfr_get_prec(v_)); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  double d() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sgn() const { return mpfr_sgn(v_); }

  // Round-trip decimal (enough digits for exact re-reading at this precision).
  std::string str() const {
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, 0, v_, MPFR_RNDN);
    std::string digits(s);
    mpfr_free_str(s);
    std::string sign;
    if (digits[0] == '-') { sign = "-"; digits.erase(0, 1); }
    std::string out = sign + digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(static_cast<long>(e) - 1);
    return out;
  }

  static Real pi(int bits) { Real r(bits); mpfr_const_pi(r.v_, MPFR_RNDN); return r; }

#define CIRCLENF_REAL_BINOP(op, fn)                                         \
  friend Real operator op(const Real& a, const Real& b) {                   \
    Real r(std::max(a.prec(), b.prec()));                                   \
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                        \
    return r;                                                               \
  }                                                                         \
  Real& operator op##=(const Real& b) {                                     \
    fn(v_, v_, b.v_, MPFR_RNDN);                                            \
    return *this;                                                           \
  }
  CIRCLENF_REAL_BINOP(+, mpfr_add)
  CIRCLENF_REAL_BINOP(-, mpfr_sub)
  CIRCLENF_REAL_BINOP(*, mpfr_mul)
  CIRCLENF_REAL_BINOP(/, mpfr_div)
#undef CIRCLENF_REAL_BINOP

  friend Real operator*(const Real& a, long b) { Real r(a.prec()); mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator*(long b, const Real& a) { return a * b; }
  friend Real operator/(const Real& a, long b) { Real r(a.prec()); mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a) { Real r(a.prec()); mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

inline Real abs(const Real& a) { Real r(a.prec()); mpfr_abs(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real sqrt(const Real& a) { Real r(a.prec()); mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real log(const Real& a) { Real r(a.prec()); mpfr_log(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real exp(const Real& a) { Real r(a.prec()); mpfr_exp(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real sin(const Real& a) { Real r(a.prec()); mpfr_sin(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real cos(const Real& a) { Real r(a.prec()); mpfr_cos(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real floor(const Real& a) { Real r(a.prec()); mpfr_floor(r.raw(), a.raw()); return r; }
inline Real pow_ui(const Real& a, unsigned long k) { Real r(a.prec()); mpfr_pow_ui(r.raw(), a.raw(), k, MPFR_RNDN); return r; }
inline Real pow2(int e, int bits) { Real r(bits); mpfr_set_ui_2exp(r.raw(), 1, e, MPFR_RNDN); return r; }
inline Real atan2(const Real& y, const Real& x) {
  Real r(std::max(y.prec(), x.prec()));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

inline Real tolerance_of(int bits) { return pow2(-bits / 2, bits); }

class Complex {
 public:
  Complex() : re_(64), im_(64) {}
  explicit Complex(int bits) : re_(bits), im_(bits) {}
  Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
  Complex(double re, double im, int bits) : re_(re, bits), im_(im, bits) {}

  const Real& re() const { return re_; }
  const Real& im() const { return im_; }
  Real& re() { return re_; }
  Real& im() { return im_; }
  int prec() const { return std::max(re_.prec(), im_.prec()); }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re_ + b.re_, a.im_ + b.im_}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re_ - b.re_, a.im_ - b.im_}; }
  friend Complex operator-(const Complex& a) { return {-a.re_, -a.im_}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend Complex operator*(const Complex& a, const Real& s) { return {a.re_ * s, a.im_ * s}; }
  friend Complex operator*(const Real& s, const Complex& a) { return a * s; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real den = b.re_ * b.re_ + b.im_ * b.im_;
    return {(a.re_ * b.re_ + a.im_ * b.im_) / den, (a.im_ * b.re_ - a.re_ * b.im_) / den};
  }
  Complex& operator+=(const Complex& b) { re_ += b.re_; im_ += b.im_; return *this; }
  Complex& operator-=(const Complex& b) { re_ -= b.re_; im_ -= b.im_; return *this; }

  Complex conj() const { return {re_, -im_}; }
  Real norm() const { return re_ * re_ + im_ * im_; }
  Real abs() const { return circlenf::sqrt(norm()); }

 private:
  Real re_, im_;
};

// e^{i*theta2pi*2pi} and the full complex exponential.
inline Complex exp_i2pi(const Real& turns) {
  int bits = turns.prec();
  Real ang = turns * (Real::pi(bits) * 2L);
  Complex r(bits);
  mpfr_sin_cos(r.im().raw(), r.re().raw(), ang.raw(), MPFR_RNDN);
  return r;
}
inline Complex exp(const Complex& z) {
  int bits = z.prec();
  Real m = exp(z.re());
  Complex r(bits);
  mpfr_sin_cos(r.im().raw(), r.re().raw(), z.im().raw(), MPFR_RNDN);
  return {r.re() * m, r.im() * m};
}

}  // namespace circlenf
