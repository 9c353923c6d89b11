#include "circlenf/diagnostics.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace circlenf {
namespace {

bool finite_real(const Real& x) { return mpfr_number_p(x.raw()) != 0; }

void push_convergent(ContinuedFraction& cf, const Real& an) {
  int n = static_cast<int>(cf.a.size());
  cf.a.push_back(an);
  if (n == 0) {
    cf.p.push_back(an);
    cf.q.push_back(Real(1L, cf.bits));
    return;
  }
  Real pm2 = n >= 2 ? cf.p[n - 2] : Real(1L, cf.bits);
  Real qm2 = n >= 2 ? cf.q[n - 2] : Real(0L, cf.bits);
  cf.p.push_back(an * cf.p[n - 1] + pm2);
  cf.q.push_back(an * cf.q[n - 1] + qm2);
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  size_t n = xs.size();
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double den = n * sxx - sx * sx;
  return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

ContinuedFraction cf_from_quotients(const std::vector<Real>& a, int bits) {
  if (a.empty()) throw Error("diagnostics", "bad_cf", "no partial quotients");
  Precision prec(bits);
  ContinuedFraction cf;
  cf.bits = bits;
  Real one(1L, bits);
  for (size_t i = 0; i < a.size(); ++i) {
    if (i >= 1 && a[i] < one)
      throw Error("diagnostics", "bad_cf", "partial quotients past a0 must be >= 1");
    push_convergent(cf, a[i]);
  }
  cf.reliable_depth = static_cast<int>(a.size()) - 1;
  return cf;
}

ContinuedFraction continued_fraction(const Multiplier& omega, int depth) {
  if (depth < 1) throw Error("diagnostics", "bad_depth", "depth must be >= 1");
  int bits = omega.bits();
  Precision prec(bits);
  using Form = Multiplier::Form;

  if (omega.form() == Form::Golden || omega.form() == Form::CfPrefix) {
    // quotients known analytically: stored prefix, then the all-ones tail
    std::vector<Real> a;
    a.push_back(Real(0L, bits));
    const auto& hint = omega.cf_hint();
    for (size_t i = 1; i < hint.size() && static_cast<int>(a.size()) <= depth; ++i)
      a.push_back(Real(static_cast<long>(hint[i]), bits));
    while (static_cast<int>(a.size()) <= depth) a.push_back(Real(1L, bits));
    return cf_from_quotients(a, bits);
  }

  if (!omega.irrational())
    throw Error("diagnostics", "rational", "continued fraction requires an irrational multiplier");

  Real cutoff = pow2(-bits + 32, bits);
  Real budget = pow2(bits - 32, bits);
  ContinuedFraction cf;
  cf.bits = bits;
  push_convergent(cf, floor(omega.omega()));
  Real frac = omega.omega() - cf.a[0];
  for (int n = 1; n <= depth; ++n) {
    if (!(frac > cutoff)) {  // remainder below noise: expansion no longer meaningful
      cf.exhausted = true;
      break;
    }
    Real y = Real(1L, bits) / frac;
    Real an = floor(y);
    frac = y - an;
    push_convergent(cf, an);
    if (cf.q[n] * cf.q[n] < budget) {
      cf.reliable_depth = n;
    } else {
      cf.exhausted = true;
      break;
    }
  }
  if (static_cast<int>(cf.a.size()) <= depth) cf.exhausted = true;
  return cf;
}

ContinuedFraction cf_exponential_quotients(int depth, int bits) {
  if (depth < 1) throw Error("diagnostics", "bad_depth", "depth must be >= 1");
  Precision prec(bits);
  mpfr_set_emax(mpfr_get_emax_max());  // q_3 already needs exponents ~ 3e11
  ContinuedFraction cf;
  cf.bits = bits;
  push_convergent(cf, Real(0L, bits));
  Real ln10 = log(Real(10L, bits));
  for (int n = 1; n <= depth; ++n) {
    Real an = exp(cf.q[n - 1] * ln10);  // saturates to +inf out of range
    push_convergent(cf, an);
    if (finite_real(cf.q[n]))
      cf.reliable_depth = n;
    else
      cf.exhausted = true;
  }
  return cf;
}

Real brjuno_partial(const ContinuedFraction& cf, int depth) {
  if (depth < 1 || static_cast<int>(cf.q.size()) <= depth)
    throw Error("diagnostics", "bad_depth", "continued fraction too short for requested depth");
  Precision prec(cf.bits);
  Real s(0.0, cf.bits);
  for (int n = 0; n < depth; ++n) {
    if (!finite_real(cf.q[n + 1]))
      throw Error("diagnostics", "unrepresentable",
                  "denominator left the floating range; use the rule-specific partials");
    s += log(cf.q[n + 1]) / cf.q[n];
  }
  return s;
}

std::vector<Real> brjuno_exponential_partials(int depth, int bits) {
  if (depth < 1) throw Error("diagnostics", "bad_depth", "depth must be >= 1");
  Precision prec(bits);
  ContinuedFraction cf = cf_exponential_quotients(depth, bits);
  Real ln10 = log(Real(10L, bits));
  std::vector<Real> out;
  Real s(0.0, bits);
  for (int n = 0; n < depth; ++n) {
    Real term(0.0, bits);
    if (finite_real(cf.q[n + 1])) {
      term = log(cf.q[n + 1]) / cf.q[n];
    } else if (finite_real(cf.q[n])) {
      // q_{n+1} = 10^{q_n} q_n + q_{n-1}: the 10^{q_n} factor dominates and
      // cancels against the denominator before it ever needs representing
      term = ln10 + log(cf.q[n]) / cf.q[n];
    } else {
      term = ln10;
    }
    s += term;
    out.push_back(s);
  }
  return out;
}

BrjunoReport brjuno(const Multiplier& omega, int depth) {
  BrjunoReport rep;
  rep.cf = continued_fraction(omega, depth);
  Precision prec(rep.cf.bits);
  int avail = std::min<int>(depth, static_cast<int>(rep.cf.q.size()) - 1);
  Real s(0.0, rep.cf.bits);
  std::vector<double> xs, ys;
  for (int n = 0; n < avail; ++n) {
    Real term = log(rep.cf.q[n + 1]) / rep.cf.q[n];
    s += term;
    rep.partials.push_back(s);
    if (term > Real(0.0, rep.cf.bits)) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(log(term).d());
    }
  }
  rep.term_trend = fit_slope(xs, ys);
  // a definitive verdict needs an eventually periodic expansion; a decimal
  // literal only ever gets evidence
  rep.verdict = omega.form() == Multiplier::Form::Literal ? "unknown" : "yes";
  return rep;
}

GrowthProfile coefficient_growth(const Normalization& norm) {
  GrowthProfile g;
  int bits = norm.phi.bits();
  Precision prec(bits);
  std::map<int, Real> sd;
  for (auto& [deg, val] : norm.small_divisor_log) sd.emplace(deg, val);
  std::vector<double> xs, ys;
  for (int l = 1; l <= norm.phi.order(); ++l) {
    GrowthProfile::Row row{l, norm.phi.max_abs_at_degree(l), 0.0, Real(0.0, bits)};
    if (!row.max_coeff.is_zero()) {
      row.root_test = exp(log(row.max_coeff) / static_cast<long>(l)).d();
      xs.push_back(static_cast<double>(l));
      ys.push_back(log(row.max_coeff).d());
    }
    auto it = sd.find(l);
    if (it != sd.end()) row.min_small_divisor = it->second;
    g.rows.push_back(std::move(row));
  }
  g.trend = fit_slope(xs, ys);
  return g;
}

namespace {

ComplexSeries exp_series(const ComplexSeries& h) {  // h(0) = 0
  int L = h.order();
  int bits = h.bits();
  Complex one(Real(1.0, bits), Real(0.0, bits));
  ComplexSeries e(L, bits);
  e[0] = one;
  ComplexSeries term(L, bits);
  term[0] = one;
  for (int j = 1; j <= L; ++j) {
    term = term * h;
    term = term.scaled(Complex(Real(1.0, bits) / static_cast<long>(j), Real(0.0, bits)));
    e = e + term;
  }
  return e;
}

struct LadderShape {
  int N, M;          // slope in lowest terms
  int T;             // truncation actually used
  bool attained;
  std::string note;
};

LadderShape slope_shape(const FoliationMap& F, int order) {
  int bits = F.g.bits();
  int T = std::min(order, F.g.order());
  Real tol = tolerance_of(bits);
  if (F.g.is_zero()) throw Error("diagnostics", "g_zero", "slope reduction needs g != 0");

  auto better = [](long n1, long m1, long n2, long m2) { return n1 * m2 > n2 * m1; };
  const int kUnset = INT_MIN;
  std::vector<std::pair<int, int>> best(T + 1, {kUnset, 1});
  std::pair<int, int> cur{kUnset, 1};
  for (int l = 1; l <= T; ++l) {
    for (int j = 0; j <= l; ++j) {
      if (!(F.g.at(j, l - j).abs() > tol)) continue;
      int n = 2 * j - l, m = l;
      if (cur.first == kUnset || better(n, m, cur.first, cur.second)) cur = {n, m};
    }
    best[l] = cur;
  }
  if (cur.first == kUnset) throw Error("diagnostics", "g_zero", "no angular monomial above tolerance");

  int g = std::gcd(std::abs(cur.first), cur.second);
  LadderShape out{cur.first == 0 ? 0 : cur.first / g, cur.first == 0 ? 1 : cur.second / g, T,
                  true, ""};
  int lo = std::max(1, T / 2);
  for (int l = lo; l <= T; ++l)
    if (best[l] != cur) out.attained = false;
  if (!out.attained)
    out.note = "slope maximum not stable across the truncation window [" + std::to_string(lo) +
               ", " + std::to_string(T) + "]";
  return out;
}

}  // namespace

SlopeReduction slope_reduction(const FoliationMap& F, int order) {
  int bits = F.g.bits();
  Precision prec(bits);
  LadderShape sh = slope_shape(F, order);

  SlopeReduction sr;
  sr.N = sh.N;
  sr.M = sh.M;
  sr.attained = sh.attained;
  sr.note = sh.note;
  sr.base_integral = (sh.M + sh.N) % 2 == 0;
  if (sr.base_integral) {
    sr.P = (sh.M + sh.N) / 2;
    sr.Q = (sh.M - sh.N) / 2;
  }

  int L = std::max(1, sh.T / sh.M);
  sr.g0 = ComplexSeries(L, bits);
  for (int k = 1; k <= L; ++k) {
    if (k * (sh.M + sh.N) % 2 != 0) continue;  // no such monomial in the ring
    int p = k * (sh.M + sh.N) / 2, q = k * (sh.M - sh.N) / 2;
    sr.ladder.push_back({k, p, q});
    if (p + q <= F.g.order()) sr.g0[k] = F.g.at(p, q);
  }

  sr.lambdaN = Complex(Real(1.0, bits), Real(0.0, bits));
  for (int i = 0; i < std::abs(sh.N); ++i) sr.lambdaN = sr.lambdaN * F.mult.lambda();
  if (sh.N < 0) sr.lambdaN = sr.lambdaN.conj();  // not reachable for real g; kept total

  // F0 = lambda^N Z exp(2 pi i N g0)
  Real twopin = Real::pi(bits) * static_cast<long>(2 * sh.N);
  ComplexSeries h = sr.g0.scaled(Complex(Real(0.0, bits), twopin));
  ComplexSeries E = exp_series(h);
  sr.F0 = ComplexSeries(L, bits);
  for (int k = 1; k <= L; ++k) sr.F0[k] = sr.lambdaN * E[k - 1];
  return sr;
}

Real reduction_consistency(const FoliationMap& F, const Normalization& norm, int order) {
  SlopeReduction sr = slope_reduction(F, order);
  if (!sr.attained)
    throw Error("diagnostics", "not_attained", "slope maximum unstable; reduction undefined");
  if (sr.N <= 0)
    throw Error("diagnostics", "degenerate_slope", "consistency check needs a positive slope");
  int bits = F.g.bits();
  Precision prec(bits);
  int L = std::min(order, norm.phi.order()) / sr.M;
  if (L < 1) throw Error("diagnostics", "order_too_low", "normalization order below one rung");

  ComplexSeries phi0(L, bits);
  for (auto& [k, p, q] : sr.ladder)
    if (k <= L && p + q <= norm.phi.order()) phi0[k] = norm.phi.at(p, q);

  ComplexSeries g0 = sr.g0.truncated(L);
  ComplexSeries F0 = sr.F0.truncated(L);
  ComplexSeries resid = g0 + phi0.compose(F0) - phi0;
  return resid.max_abs();
}

}  // namespace circlenf
