#include "circlenf/maps.hpp"

#include <cmath>
#include <utility>

namespace circlenf {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

Real at_bits(const Real& x, int bits) {
  Real r(bits);
  mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real frac_mod1(const Real& x) { return x - floor(x); }

// Gauss-map probe: a value whose continued fraction terminates within a few
// dozen steps at this precision is treated as rational.
bool looks_rational(const Real& omega) {
  int bits = omega.prec();
  Real y = frac_mod1(omega);
  Real cutoff = pow2(-bits + 32, bits);
  Real one(1L, bits);
  for (int step = 0; step < 64; ++step) {
    if (abs(y) < cutoff) return true;
    y = frac_mod1(one / y);
  }
  return false;
}

bool perfect_square(long D) {
  if (D < 0) return false;
  long r = std::lround(std::sqrt(static_cast<double>(D)));
  for (long c = r - 2; c <= r + 2; ++c)
    if (c >= 0 && c * c == D) return true;
  return false;
}

}  // namespace

Multiplier::Multiplier(Form f, Real omega, int bits)
    : form_(f), omega_(frac_mod1(at_bits(omega, bits))), modulus_(1.0, bits) {}

Multiplier Multiplier::golden(int bits) {
  Precision p(bits);
  Real w = (sqrt(Real(5L, bits)) - Real(1L, bits)) / 2L;
  Multiplier m(Form::Golden, w, bits);
  m.cf_ = {0};  // [0; 1, 1, 1, ...]
  return m;
}

Multiplier Multiplier::literal(const Real& omega) {
  Multiplier m(Form::Literal, omega, omega.prec());
  m.irrational_ = !looks_rational(m.omega_);
  return m;
}

Multiplier Multiplier::literal_str(const std::string& decimal, int bits) {
  return literal(Real(decimal, bits));
}

Multiplier Multiplier::quad(long p, long q, long D, long r, int bits) {
  Precision prec(bits);
  if (r == 0) throw Error("maps", "bad_quad", "quadratic form needs r != 0");
  if (D < 0) throw Error("maps", "bad_quad", "quadratic form needs D >= 0");
  Real w = (Real(p, bits) + Real(q, bits) * sqrt(Real(D, bits))) / Real(r, bits);
  Multiplier m(Form::Quad, w, bits);
  m.irrational_ = (q != 0) && !perfect_square(D);
  m.quad_ = {p, q, D, r};
  return m;
}

Multiplier Multiplier::cf_prefix(const std::vector<long long>& a, int bits) {
  Precision prec(bits);
  if (a.empty()) throw Error("maps", "bad_cf", "empty continued-fraction prefix");
  for (size_t i = 1; i < a.size(); ++i)
    if (a[i] < 1) throw Error("maps", "bad_cf", "partial quotients must be >= 1");
  // prefix completed with the all-ones tail: x_tail = (1+sqrt 5)/2
  Real x = (Real(1L, bits) + sqrt(Real(5L, bits))) / 2L;
  for (size_t i = a.size() - 1; i >= 1; --i)
    x = Real(static_cast<long>(a[i]), bits) + Real(1L, bits) / x;
  Real w = Real(static_cast<long>(a[0]), bits) + Real(1L, bits) / x;
  Multiplier m(Form::CfPrefix, w, bits);
  m.cf_.assign(a.begin(), a.end());
  return m;
}

Multiplier Multiplier::with_modulus(const Real& m) const {
  Real one(1L, bits());
  if (!(m > Real(0L, bits())) || m > one)
    throw Error("maps", "bad_modulus", "modulus must lie in (0, 1]");
  Multiplier out = *this;
  out.modulus_ = at_bits(m, bits());
  return out;
}

bool Multiplier::weak() const { return modulus_ == Real(1L, bits()); }

Complex Multiplier::lambda() const { return exp_i2pi(omega_) * modulus_; }

FoliationMap make_family(Family tag, const Multiplier& mult, const Real& a, int d,
                         int order, int bits) {
  Precision prec(bits);
  if (tag == Family::Custom)
    throw Error("maps", "bad_family", "custom maps take explicit f and g");
  if (d < 1) throw Error("maps", "bad_degree", "d must be >= 1");
  if (order < 1) throw Error("maps", "bad_order", "order must be >= 1");

  RadialSeries f(order, bits);
  if (d <= order) f[d] = at_bits(a, bits);

  BiSeries g(order, bits, true);
  Real half(0.5, bits);
  Complex mi_half(Real(bits), -half);  // 1/(2i)
  Complex pi_half(Real(bits), half);
  switch (tag) {
    case Family::A:
      if (order >= 1) {
        g.at(1, 0) = mi_half;
        g.at(0, 1) = pi_half;
      }
      break;
    case Family::B:
      if (order >= 2) g.at(1, 1) = Complex(Real(1L, bits), Real(bits));
      if (order >= 3) {
        g.at(2, 1) = mi_half;
        g.at(1, 2) = pi_half;
      }
      break;
    case Family::C: {
      if (order >= 2) g.at(1, 1) = Complex(Real(1L, bits), Real(bits));
      Real fact(1L, bits);
      for (int n = 1; n + 2 <= order; ++n) {
        fact = fact * static_cast<long>(n);
        Real c = half / fact;
        g.at(1 + n, 1) = Complex(Real(bits), -c);
        g.at(1, 1 + n) = Complex(Real(bits), c);
      }
      break;
    }
    case Family::Custom:
      break;
  }
  return FoliationMap{mult, f, g, tag, at_bits(a, bits), d};
}

FoliationMap make_family(Family tag, const Real& omega, const Real& a, int d,
                         int order, int bits) {
  return make_family(tag, Multiplier::literal(at_bits(omega, bits)), a, d, order, bits);
}

FoliationMap make_custom(const Multiplier& mult, const RadialSeries& f, const BiSeries& g) {
  int bits = g.bits();
  Real tol = tolerance_of(bits);
  if (!f[0].is_zero())
    throw Error("maps", "nonzero_constant", "f must vanish at the origin");
  if (!g.at(0, 0).is_zero())
    throw Error("maps", "nonzero_constant", "g must vanish at the origin");
  Real scale = g.max_abs();
  if (scale < Real(1L, bits)) scale = Real(1L, bits);
  if (g.asymmetry() > tol * scale)
    throw Error("maps", "not_real", "g must be real-valued");
  RadialSeries fr = f.truncated(g.order());
  BiSeries gr = g;
  gr.set_real_flag(true);
  return FoliationMap{mult, fr, gr, Family::Custom, Real(bits), 1};
}

std::pair<BiSeries, BiSeries> as_series(const FoliationMap& F) {
  int N = F.g.order();
  int bits = F.g.bits();
  ComplexSeries onepf = to_complex(F.f.truncated(N));
  onepf[0] = Complex(Real(1L, bits), Real(bits));
  BiSeries Fz = F.g.exp_2pii().mul_radial(onepf).shifted(1, 0).scaled(F.lambda());
  return {Fz, Fz.conj_flip()};
}

Complex eval_map(const FoliationMap& F, const Complex& z, bool* outside_validity) {
  int bits = F.g.bits();
  if (outside_validity) *outside_validity = false;
  Real u = z.norm();
  Real radial = Real(1L, bits) + F.f.eval(u);
  Complex lam = F.lambda();
  switch (F.tag) {
    case Family::A:
      return lam * z * exp_i2pi(z.im()) * radial;
    case Family::B:
      return lam * z * exp_i2pi(u * (Real(1L, bits) + z.im())) * radial;
    case Family::C: {
      Real im_ez = exp(z.re()) * sin(z.im());
      return lam * z * exp_i2pi(u * (Real(1L, bits) + im_ez)) * radial;
    }
    case Family::Custom:
    default: {
      if (outside_validity && z.abs() > Real(0.1, bits)) *outside_validity = true;
      Complex gv = F.g.eval(z);
      Real two_pi = Real::pi(bits) * 2L;
      Complex rot = exp(Complex(-two_pi * gv.im(), two_pi * gv.re()));
      return lam * z * rot * radial;
    }
  }
}

Real radial_nu(const FoliationMap& F, const Real& r) {
  int bits = F.g.bits();
  Real u = r * r;
  return F.mult.modulus() * r * (Real(1L, bits) + F.f.eval(u));
}

namespace {

// cosine/sine amplitudes of theta -> g(r e^{2 pi i theta}) for a real-valued g
struct HarmonicTable {
  double mean = 0.0;
  std::vector<double> cosv, sinv;  // index nu-1
};

HarmonicTable harmonics(const BiSeries& g, double r) {
  HarmonicTable t;
  t.cosv.assign(g.order(), 0.0);
  t.sinv.assign(g.order(), 0.0);
  for (int l = 0; l <= g.order(); ++l) {
    for (int j = 0; j <= l; ++j) {
      int k = l - j;
      int nu = j - k;
      if (nu < 0) continue;
      double re = g.at(j, k).re().d();
      double im = g.at(j, k).im().d();
      double rp = std::pow(r, l);
      if (nu == 0) {
        t.mean += re * rp;
      } else {
        t.cosv[nu - 1] += 2.0 * re * rp;
        t.sinv[nu - 1] -= 2.0 * im * rp;
      }
    }
  }
  return t;
}

}  // namespace

double polar_angular(const FoliationMap& F, double r, double theta) {
  switch (F.tag) {
    case Family::A:
      return r * std::sin(kTwoPi * theta);
    case Family::B:
      return r * r * (1.0 + r * std::sin(kTwoPi * theta));
    case Family::C:
      return r * r *
             (1.0 + std::exp(r * std::cos(kTwoPi * theta)) * std::sin(r * std::sin(kTwoPi * theta)));
    case Family::Custom:
    default: {
      HarmonicTable t = harmonics(F.g, r);
      double s = t.mean;
      for (size_t nu = 1; nu <= t.cosv.size(); ++nu) {
        s += t.cosv[nu - 1] * std::cos(kTwoPi * nu * theta) +
             t.sinv[nu - 1] * std::sin(kTwoPi * nu * theta);
      }
      return s;
    }
  }
}

PolarComponents polar_components(const FoliationMap& F, double r) {
  PolarComponents pc;
  pc.nu = radial_nu(F, Real(r, F.g.bits())).d();
  double omega = F.mult.omega().d();
  switch (F.tag) {
    case Family::A:
      pc.lift = [omega, r](double th) { return th + omega + r * std::sin(kTwoPi * th); };
      break;
    case Family::B:
      pc.lift = [omega, r](double th) {
        return th + omega + r * r * (1.0 + r * std::sin(kTwoPi * th));
      };
      break;
    case Family::C:
      pc.lift = [omega, r](double th) {
        double c = r * std::cos(kTwoPi * th), s = r * std::sin(kTwoPi * th);
        return th + omega + r * r * (1.0 + std::exp(c) * std::sin(s));
      };
      break;
    case Family::Custom:
    default: {
      HarmonicTable t = harmonics(F.g, r);
      pc.lift = [omega, t](double th) {
        double s = t.mean;
        for (size_t nu = 1; nu <= t.cosv.size(); ++nu) {
          s += t.cosv[nu - 1] * std::cos(kTwoPi * nu * th) +
               t.sinv[nu - 1] * std::sin(kTwoPi * nu * th);
        }
        return th + omega + s;
      };
      break;
    }
  }
  return pc;
}

}  // namespace circlenf
