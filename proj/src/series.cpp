#include "circlenf/series.hpp"

namespace circlenf {

RadialSeries radial_from(std::initializer_list<double> coeffs, int order, int bits) {
  RadialSeries r(order, bits);
  int s = 0;
  for (double c : coeffs) {
    if (s > order) break;
    r[s] = Real(c, bits);
    ++s;
  }
  return r;
}

ComplexSeries to_complex(const RadialSeries& a) {
  ComplexSeries r(a.order(), a.bits());
  for (int s = 0; s <= a.order(); ++s) r[s] = Complex(a[s], Real(a.bits()));
  return r;
}

RadialSeries real_part(const ComplexSeries& a, Real* imag_residue) {
  RadialSeries r(a.order(), a.bits());
  Real res(a.bits());
  for (int s = 0; s <= a.order(); ++s) {
    r[s] = a[s].re();
    Real im = abs(a[s].im());
    if (im > res) res = im;
  }
  if (imag_residue) *imag_residue = res;
  return r;
}

static void require_zero_const_r(const RadialSeries& s, const char* who) {
  if (!s[0].is_zero())
    throw Error("series", "nonzero_constant", std::string(who) + ": nonzero constant term");
}

RadialSeries log1p_series(const RadialSeries& s) {
  require_zero_const_r(s, "log1p_series");
  int N = s.order(), bits = s.bits();
  RadialSeries r(N, bits), p(N, bits);
  p[0] = Real(1.0, bits);
  for (int k = 1; k <= N; ++k) {  // sum (-1)^{k+1} s^k / k
    p = p * s;
    Real coef(bits);
    mpfr_set_si(coef.raw(), (k % 2) ? 1 : -1, MPFR_RNDN);
    coef = coef / static_cast<long>(k);
    for (int t = 0; t <= N; ++t) r[t] += p[t] * coef;
  }
  return r;
}

RadialSeries expm1_series(const RadialSeries& s) {
  require_zero_const_r(s, "expm1_series");
  int N = s.order(), bits = s.bits();
  RadialSeries r(N, bits), term(N, bits);
  term[0] = Real(1.0, bits);
  for (int k = 1; k <= N; ++k) {
    term = term * s;
    term = term.scaled(Real(1.0, bits) / static_cast<long>(k));
    for (int t = 0; t <= N; ++t) r[t] += term[t];
  }
  return r;
}

RadialSeries pow1p_series(const RadialSeries& s, const Real& alpha) {
  return expm1_series(log1p_series(s).scaled(alpha));
}

RadialSeries radial_reversion(const RadialSeries& a) {
  require_zero_const_r(a, "radial_reversion");
  int N = a.order(), bits = a.bits();
  // h(u) = u(1+a(u))^2, solved for rho with h(u(1+rho)) = u, degree by degree.
  // Track everything one order higher so the top rho coefficient is reachable.
  int M = N + 1;
  RadialSeries one(M, bits);
  one[0] = Real(1.0, bits);
  RadialSeries ax = a.truncated(M);
  RadialSeries onepa = one + ax;
  RadialSeries rho(M, bits);
  for (int s = 1; s <= N; ++s) {
    // R = u(1+rho): as series in u, R/u = 1+rho, and h(R) = R*(1+a(R))^2.
    RadialSeries R(M, bits);
    for (int t = 1; t <= M; ++t) R[t] = (t == 1 ? Real(1.0, bits) : Real(bits)) + rho[t - 1];
    RadialSeries aR = ax.compose(R);
    RadialSeries f = one + aR;
    RadialSeries hR = R * f * f;  // should equal u
    rho[s] = rho[s] - hR[s + 1];
  }
  return rho.truncated(N);
}

// ---------- BiSeries ----------

int BiSeries::idx(int j, int k) const {
  int l = j + k;
  if (j < 0 || k < 0 || l > order_)
    throw Error("series", "index_out_of_range", "BiSeries index outside triangle");
  return l * (l + 1) / 2 + k;
}

BiSeries::BiSeries(int order, int bits, bool real_valued)
    : order_(order), bits_(bits), real_valued_(real_valued),
      c_((order + 1) * (order + 2) / 2, Complex(bits)) {
  if (order < 0) throw Error("series", "bad_order", "negative order");
}

BiSeries BiSeries::monomial(int j, int k, const Complex& v, int order, int bits) {
  BiSeries r(order, bits);
  r.at(j, k) = v;
  return r;
}

BiSeries operator+(const BiSeries& a, const BiSeries& b) {
  detail::check_match(a.order_, b.order_, a.bits_, b.bits_, "add");
  BiSeries r(a.order_, a.bits_, a.real_valued_ && b.real_valued_);
  for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
  return r;
}

BiSeries operator-(const BiSeries& a, const BiSeries& b) {
  detail::check_match(a.order_, b.order_, a.bits_, b.bits_, "sub");
  BiSeries r(a.order_, a.bits_, a.real_valued_ && b.real_valued_);
  for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
  return r;
}

BiSeries operator*(const BiSeries& a, const BiSeries& b) {
  detail::check_match(a.order_, b.order_, a.bits_, b.bits_, "mul");
  int N = a.order_, bits = a.bits_;
  BiSeries r(N, bits, a.real_valued_ && b.real_valued_);
  // raw accumulation to keep temporaries out of the inner loop
  Real t1(bits), t2(bits);
  for (int l1 = 0; l1 <= N; ++l1)
    for (int j1 = l1; j1 >= 0; --j1) {
      const Complex& x = a.c_[a.idx(j1, l1 - j1)];
      if (x.is_zero()) continue;
      int k1 = l1 - j1;
      for (int l2 = 0; l2 + l1 <= N; ++l2)
        for (int j2 = l2; j2 >= 0; --j2) {
          const Complex& y = b.c_[b.idx(j2, l2 - j2)];
          if (y.is_zero()) continue;
          Complex& dst = r.c_[r.idx(j1 + j2, k1 + l2 - j2)];
          mpfr_mul(t1.raw(), x.re().raw(), y.re().raw(), MPFR_RNDN);
          mpfr_mul(t2.raw(), x.im().raw(), y.im().raw(), MPFR_RNDN);
          mpfr_sub(t1.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
          mpfr_add(dst.re().raw(), dst.re().raw(), t1.raw(), MPFR_RNDN);
          mpfr_mul(t1.raw(), x.re().raw(), y.im().raw(), MPFR_RNDN);
          mpfr_mul(t2.raw(), x.im().raw(), y.re().raw(), MPFR_RNDN);
          mpfr_add(t1.raw(), t1.raw(), t2.raw(), MPFR_RNDN);
          mpfr_add(dst.im().raw(), dst.im().raw(), t1.raw(), MPFR_RNDN);
        }
    }
  return r;
}

BiSeries BiSeries::scaled(const Complex& s) const {
  BiSeries r(order_, bits_, real_valued_ && s.im().is_zero());
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
  return r;
}
BiSeries BiSeries::scaled(const Real& s) const { return scaled(Complex(s, Real(bits_))); }

BiSeries BiSeries::conj_flip() const {
  BiSeries r(order_, bits_, real_valued_);
  for (int l = 0; l <= order_; ++l)
    for (int j = 0; j <= l; ++j) r.at(l - j, j) = at(j, l - j).conj();
  return r;
}

Real BiSeries::asymmetry() const {
  Real m(bits_);
  for (int l = 0; l <= order_; ++l)
    for (int j = 0; j <= l; ++j) {
      Real d = (at(j, l - j) - at(l - j, j).conj()).abs();
      if (d > m) m = d;
    }
  return m;
}

Real BiSeries::symmetrize() {
  Real res = asymmetry();
  Real half(0.5, bits_);
  for (int l = 0; l <= order_; ++l)
    for (int j = 0; j <= l; ++j) {
      if (j > l - j) continue;
      Complex avg = (at(j, l - j) + at(l - j, j).conj()) * half;
      at(j, l - j) = avg;
      at(l - j, j) = avg.conj();
    }
  real_valued_ = true;
  return res;
}

BiSeries BiSeries::exp_2pii() const {
  if (!at(0, 0).is_zero())
    throw Error("series", "nonzero_constant", "exp_2pii: nonzero constant term");
  int N = order_, bits = bits_;
  Real twopi = Real::pi(bits) * 2L;
  BiSeries x = scaled(Complex(Real(bits), twopi));  // 2*pi*i*s
  BiSeries r(N, bits), term(N, bits);
  r.at(0, 0) = Complex(1.0, 0.0, bits);
  term.at(0, 0) = Complex(1.0, 0.0, bits);
  for (int m = 1; m <= N; ++m) {
    term = term * x;
    term = term.scaled(Real(1.0, bits) / static_cast<long>(m));
    if (term.is_zero()) break;
    r = r + term;
  }
  r.set_real_flag(false);
  return r;
}

BiSeries BiSeries::substitute(const BiSeries& F, const BiSeries& Fbar) const {
  detail::check_match(order_, F.order(), bits_, F.bits(), "substitute");
  detail::check_match(order_, Fbar.order(), bits_, Fbar.bits(), "substitute");
  if (!F.at(0, 0).is_zero() || !Fbar.at(0, 0).is_zero())
    throw Error("series", "nonzero_constant", "substitute: map has nonzero constant term");
  int N = order_, bits = bits_;
  // group by j:  result = sum_j F^j * (sum_k c_{jk} Fbar^k)
  std::vector<BiSeries> Fbp;
  Fbp.reserve(N + 1);
  Fbp.emplace_back(N, bits);
  Fbp[0].at(0, 0) = Complex(1.0, 0.0, bits);
  for (int k = 1; k <= N; ++k) Fbp.push_back(Fbp[k - 1] * Fbar);
  BiSeries result(N, bits);
  BiSeries Fp(N, bits);
  Fp.at(0, 0) = Complex(1.0, 0.0, bits);
  for (int j = 0; j <= N; ++j) {
    if (j > 0) Fp = Fp * F;
    BiSeries tj(N, bits);
    bool any = false;
    for (int k = 0; j + k <= N; ++k) {
      const Complex& c = at(j, k);
      if (c.is_zero()) continue;
      tj = tj + Fbp[k].scaled(c);
      any = true;
    }
    if (any) result = result + Fp * tj;
  }
  result.set_real_flag(false);
  return result;
}

std::pair<RadialSeries, BiSeries> BiSeries::resonant_part() const {
  RadialSeries diag(order_ / 2, bits_);
  BiSeries rem(order_, bits_, real_valued_);
  Real residue(bits_);
  for (int l = 0; l <= order_; ++l)
    for (int j = 0; j <= l; ++j) {
      if (2 * j == l) {
        diag[j] = at(j, j).re();
        Real im = abs(at(j, j).im());
        if (im > residue) residue = im;
      } else {
        rem.at(j, l - j) = at(j, l - j);
      }
    }
  return {diag, rem};
}

ComplexSeries BiSeries::holomorphic_part() const {
  ComplexSeries r(order_, bits_);
  for (int j = 0; j <= order_; ++j) r[j] = at(j, 0);
  return r;
}

BiSeries BiSeries::mul_radial(const ComplexSeries& p) const {
  BiSeries r(order_, bits_);
  for (int s = 0; s <= std::min(p.order(), order_ / 2); ++s) {
    if (p[s].is_zero()) continue;
    for (int l = 0; l + 2 * s <= order_; ++l)
      for (int j = 0; j <= l; ++j) r.at(j + s, l - j + s) += at(j, l - j) * p[s];
  }
  return r;
}

BiSeries BiSeries::shifted(int j0, int k0) const {
  BiSeries r(order_, bits_);
  for (int l = 0; l + j0 + k0 <= order_; ++l)
    for (int j = 0; j <= l; ++j) r.at(j + j0, l - j + k0) = at(j, l - j);
  return r;
}

BiSeries BiSeries::truncated(int new_order) const {
  BiSeries r(new_order, bits_, real_valued_);
  for (int l = 0; l <= std::min(order_, new_order); ++l)
    for (int j = 0; j <= l; ++j) r.at(j, l - j) = at(j, l - j);
  return r;
}

Complex BiSeries::eval(const Complex& z) const { return eval2(z, z.conj()); }

Complex BiSeries::eval2(const Complex& z, const Complex& w) const {
  int N = order_, bits = bits_;
  std::vector<Complex> zp(N + 1, Complex(bits)), wp(N + 1, Complex(bits));
  zp[0] = Complex(1.0, 0.0, bits);
  wp[0] = Complex(1.0, 0.0, bits);
  for (int i = 1; i <= N; ++i) {
    zp[i] = zp[i - 1] * z;
    wp[i] = wp[i - 1] * w;
  }
  Complex acc(bits);
  for (int l = 0; l <= N; ++l)
    for (int j = 0; j <= l; ++j) {
      const Complex& c = at(j, l - j);
      if (!c.is_zero()) acc += c * zp[j] * wp[l - j];
    }
  return acc;
}

Real BiSeries::max_abs() const {
  Real m(bits_);
  for (auto& x : c_) {
    Real a = x.abs();
    if (a > m) m = a;
  }
  return m;
}

Real BiSeries::max_abs_at_degree(int deg) const {
  Real m(bits_);
  for (int j = 0; j <= deg; ++j) {
    Real a = at(j, deg - j).abs();
    if (a > m) m = a;
  }
  return m;
}

bool BiSeries::is_zero() const {
  for (auto& x : c_)
    if (!x.is_zero()) return false;
  return true;
}

}  // namespace circlenf
