#include "circlenf/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace circlenf {
namespace {

RadialSeries mul_by_t(const RadialSeries& s) {  // t * s, truncated
  RadialSeries r(s.order(), s.bits());
  for (int m = 1; m <= s.order(); ++m) r[m] = s[m - 1];
  return r;
}

RadialSeries div_by_t(const RadialSeries& s) {  // s/t for s with zero constant
  RadialSeries r(s.order(), s.bits());
  for (int m = 0; m < s.order(); ++m) r[m] = s[m + 1];
  return r;
}

RadialSeries one_plus(const RadialSeries& s) {
  RadialSeries r = s;
  r[0] = r[0] + Real(1L, s.bits());
  return r;
}

// inverse of a unit series (w[0] != 0)
RadialSeries unit_inverse(const RadialSeries& w) {
  int bits = w.bits();
  RadialSeries inv(w.order(), bits);
  Real w0 = w[0];
  inv[0] = Real(1L, bits) / w0;
  for (int m = 1; m <= w.order(); ++m) {
    Real s(bits);
    for (int i = 1; i <= m; ++i) s = s + w[i] * inv[m - i];
    inv[m] = -s / w0;
  }
  return inv;
}

ComplexSeries complex_log_unit(const ComplexSeries& p) {  // log of p, p[0] = 1
  int N = p.order(), bits = p.bits();
  ComplexSeries x = p;
  x[0] = Complex(bits);  // p - 1
  ComplexSeries out(N, bits), pw(N, bits);
  pw[0] = Complex(Real(1L, bits), Real(bits));
  for (int k = 1; k <= N; ++k) {
    pw = pw * x;
    Real coef = Real(k % 2 == 1 ? 1L : -1L, bits) / Real(static_cast<long>(k), bits);
    for (int m = 0; m <= N; ++m) out[m] = out[m] + pw[m] * Complex(coef, Real(bits));
  }
  return out;
}

ComplexSeries expc_2pii(const RadialSeries& g) {  // e^{2 pi i g}, g(0) = 0
  int N = g.order(), bits = g.bits();
  Real two_pi = Real::pi(bits) * 2L;
  ComplexSeries x(N, bits);
  for (int m = 1; m <= N; ++m) x[m] = Complex(Real(bits), two_pi * g[m]);
  ComplexSeries out(N, bits), pw(N, bits);
  out[0] = Complex(Real(1L, bits), Real(bits));
  pw[0] = out[0];
  Real fact(1L, bits);
  for (int k = 1; k <= N; ++k) {
    pw = pw * x;
    fact = fact * static_cast<long>(k);
    for (int m = 0; m <= N; ++m)
      out[m] = out[m] + pw[m] * Complex(Real(1L, bits) / fact, Real(bits));
  }
  return out;
}

Real scale_of(const RadialSeries& s) {
  Real m = s.max_abs();
  if (m < Real(1L, s.bits())) m = Real(1L, s.bits());
  return m;
}

}  // namespace

GaugeMap make_gauge_map(const RadialSeries& a, const RadialSeries& b) {
  detail::check_match(a.order(), b.order(), a.bits(), b.bits(), "gauge map");
  if (!a[0].is_zero() || !b[0].is_zero())
    throw Error("transforms", "nonzero_constant", "gauge map needs a(0) = b(0) = 0");
  return GaugeMap{a, b};
}

NormalFormPair apply_gauge(const RadialSeries& nstar, const RadialSeries& f,
                           const GaugeMap& H, const Multiplier& mult, int order) {
  int bits = f.bits();
  RadialSeries a = H.a.truncated(order), b = H.b.truncated(order);
  RadialSeries fs = f.truncated(order), ns = nstar.truncated(order);

  // R = |H^{-1}|^2 = u (1 + rho),  S = |N ∘ H^{-1}|^2 = R (1 + f(R))^2
  RadialSeries rho = radial_reversion(a);
  RadialSeries R = mul_by_t(one_plus(rho.truncated(order)));
  RadialSeries fR = fs.compose(R);
  RadialSeries S = R + R * (fR.scaled(Real(2L, bits)) + fR * fR);

  RadialSeries alpha =
      expm1_series(log1p_series(fR) + log1p_series(a.compose(S)) - log1p_series(a.compose(R)));
  RadialSeries beta = ns.compose(R) + b.compose(S) - b.compose(R);
  return NormalFormPair{alpha, beta, mult};
}

Monomialization monomialize_conservative(const RadialSeries& nstar, int order) {
  int bits = nstar.bits();
  RadialSeries ns = nstar.truncated(order);
  Real tol = tolerance_of(bits) * scale_of(ns);
  int p = ns.valuation(tol);
  if (p < 0)
    throw Error("transforms", "zero_torsion", "n* vanishes: nothing to monomialize");
  Real np = ns[p];
  RadialSeries ratio(order, bits);  // n*(u) / (np u^p) - 1
  for (int m = 0; m + p <= order; ++m) ratio[m] = ns[m + p] / np;
  ratio[0] = ratio[0] - Real(1L, bits);
  RadialSeries astar = pow1p_series(ratio, Real(1L, bits) / Real(2L * p, bits));
  return Monomialization{astar, p, np};
}

InvariantReport first_nonvanishing_invariant(const NormalFormPair& n1,
                                             const NormalFormPair& n2) {
  int bits = n1.alpha.bits();
  InvariantReport rep;
  rep.v1 = Real(bits);
  rep.v2 = Real(bits);
  Real tol1 = tolerance_of(bits) * scale_of(n1.alpha);
  Real tol2 = tolerance_of(bits) * scale_of(n2.alpha);
  rep.k1 = n1.alpha.valuation(tol1);
  rep.k2 = n2.alpha.valuation(tol2);
  if (rep.k1 < 0 && rep.k2 < 0) {
    rep.indeterminate = true;  // both conservative to this order
    return rep;
  }
  if (rep.k1 >= 0) rep.v1 = n1.alpha[rep.k1];
  if (rep.k2 >= 0) rep.v2 = n2.alpha[rep.k2];
  Real sc = abs(rep.v1) > abs(rep.v2) ? abs(rep.v1) : abs(rep.v2);
  if (sc < Real(1L, bits)) sc = Real(1L, bits);
  rep.match = (rep.k1 == rep.k2) && (abs(rep.v1 - rep.v2) < tolerance_of(bits) * sc * 1000L);
  return rep;
}

namespace {

struct Leading {
  int r;
  Real b;
};

Leading leading_of(const RadialSeries& F, const char* who) {
  int bits = F.bits();
  Real tol = tolerance_of(bits) * scale_of(F);
  if (abs(F[0]) > tol || abs(F[1] - Real(1L, bits)) > tol)
    throw Error("transforms", "not_tangent",
                std::string(who) + ": series must be tangent to the identity");
  for (int m = 2; m <= F.order(); ++m)
    if (abs(F[m]) > tol) return {m - 1, -F[m]};
  throw Error("transforms", "no_leading_contraction",
              std::string(who) + ": no term beyond t (b = 0)");
}

}  // namespace

OneDimConjugacy one_dim_conjugacy(const RadialSeries& F2, int order,
                                  const RadialSeries* completion) {
  int bits = F2.bits();
  RadialSeries f2 = F2.truncated(order);
  Leading lead = leading_of(f2, "one_dim_conjugacy");
  int r = lead.r;
  Real b = lead.b;
  if (order < 2 * r + 1)
    throw Error("transforms", "order_too_low",
                "need order >= 2r+1 to determine the normal-form jet");
  RadialSeries tail(order, bits);
  if (completion) {
    tail = completion->truncated(order);
    Real tol = tolerance_of(bits) * scale_of(tail);
    for (int m = 0; m <= std::min(2 * r + 1, order); ++m)
      if (abs(tail[m]) > tol)
        throw Error("transforms", "bad_completion",
                    "completion must vanish through t^{2r+1}");
  }

  OneDimConjugacy out{RadialSeries(order, bits), b, Real(bits), r};
  out.phi[1] = Real(1L, bits);
  Real c(bits);

  auto build_F1 = [&]() {
    RadialSeries F1 = tail;
    F1[1] = F1[1] + Real(1L, bits);
    F1[r + 1] = F1[r + 1] - b;
    F1[2 * r + 1] = F1[2 * r + 1] + c;
    return F1;
  };

  // determine phi_M (M = D - r) or c (D = 2r+1) from the degree-D mismatch
  for (int D = r + 2; D <= order; ++D) {
    RadialSeries resid = out.phi.compose(build_F1()) - f2.compose(out.phi);
    if (D == 2 * r + 1) {
      c = c - resid[D];  // phi' has unit constant term, so d resid_D / dc = 1
    } else {
      int M = D - r;
      out.phi[M] = out.phi[M] + resid[D] / (b * Real(static_cast<long>(M - r - 1), bits));
    }
  }
  out.c = c;
  return out;
}

OneDimMap one_dim_from_series(const RadialSeries& F1) {
  Leading lead = leading_of(F1, "one_dim_from_series");
  return OneDimMap{F1, lead.b, lead.r};
}

RadialSeries solve_gamma(const OneDimMap& F1, const RadialSeries& rhs, int order) {
  int bits = F1.F1.bits();
  int r = F1.r;
  RadialSeries f1 = F1.F1.truncated(order);
  RadialSeries rh = rhs.truncated(order);
  {
    Real tol = tolerance_of(bits) * scale_of(rh);
    int val = rh.valuation(tol);
    if (val >= 0 && val <= r)
      throw Error("transforms", "outside_range",
                  "rhs must have valuation >= r+1");
  }

  // u(t) = F1/t - 1 has valuation r;  w = u / t^r is a unit
  RadialSeries u = div_by_t(f1);
  u[0] = u[0] - Real(1L, bits);
  RadialSeries w(order, bits);
  for (int m = 0; m + r <= order; ++m) w[m] = u[m + r];
  RadialSeries rhs_over_u(order, bits);
  for (int m = 0; m + r <= order; ++m) rhs_over_u[m] = rh[m + r];
  rhs_over_u = rhs_over_u * unit_inverse(w);

  auto Einv = [&](const RadialSeries& x) {
    RadialSeries y(order, bits);
    for (int m = 1; m <= order; ++m) y[m] = x[m] / static_cast<long>(m);
    return y;
  };
  // T x = sum_{k>=2} u^{k-1} t^k x^{(k)} / k!   (binomial-weighted diagonals)
  auto T = [&](const RadialSeries& x) {
    RadialSeries acc(order, bits);
    RadialSeries upow = u;  // u^{k-1}
    for (int k = 2; (k - 1) * r <= order; ++k) {
      RadialSeries dk(order, bits);
      for (int m = k; m <= order; ++m) {
        Real binom(1L, bits);  // C(m, k)
        for (int i = 0; i < k; ++i)
          binom = binom * static_cast<long>(m - i) / static_cast<long>(i + 1);
        dk[m] = binom * x[m];
      }
      acc = acc + upow * dk;
      upow = upow * u;
      if (upow.is_zero()) break;
    }
    return acc;
  };

  RadialSeries gamma(order, bits);
  RadialSeries term = Einv(rhs_over_u);
  for (int l = 0; l <= order + 2; ++l) {
    gamma = gamma + term;
    term = Einv(T(term)).scaled(Real(-1L, bits));
    if (term.is_zero()) break;
  }
  return gamma;
}

PolyNormalForm polynomial_normal_form(const NormalFormPair& n2, int order) {
  int bits = n2.alpha.bits();
  RadialSeries alpha = n2.alpha.truncated(order), beta = n2.beta.truncated(order);
  Real tol = tolerance_of(bits);
  int r = alpha.valuation(tol * scale_of(alpha));
  if (r < 0)
    throw Error("transforms", "conservative_input",
                "alpha vanishes: conservative case, use monomialize_conservative");
  if (alpha[r].sgn() >= 0)
    throw Error("transforms", "not_contracting", "leading alpha term must be negative");
  if (order < 2 * r + 1)
    throw Error("transforms", "order_too_low", "need order >= 2r+1");

  // radial one-dimensional map F2(t) = t (1 + alpha)^2
  RadialSeries onepa = one_plus(alpha);
  RadialSeries F2 = mul_by_t(onepa * onepa);
  Real b = alpha[r] * (-2L);

  OneDimConjugacy od = one_dim_conjugacy(F2, order);
  Real c = od.c;

  // S = (1 - b t^r + c t^{2r})^{1/2};  G = r-jet of beta ∘ phi
  RadialSeries kernel(order, bits);
  kernel[r] = -b;
  kernel[2 * r] = c;
  RadialSeries S = one_plus(pow1p_series(kernel, Real(0.5, bits)));
  RadialSeries G = beta.compose(od.phi).truncated(r).truncated(order);

  // P = 2r-jet of S e^{2 pi i G};  Q = 2r-jet of S (split variant)
  ComplexSeries P = (to_complex(S) * expc_2pii(G)).truncated(2 * r).truncated(order);
  RadialSeries Q = S.truncated(2 * r).truncated(order);

  PolyNormalForm out{P,      Q,
                     G,      od.phi,
                     RadialSeries(order, bits), RadialSeries(order, bits),
                     b,      c,
                     r,      Real(bits),
                     Real(bits)};

  // combined target: radial F1 = t |P(t)|^2, angular g1 = Im(log P) / (2 pi)
  ComplexSeries Pbar(order, bits);
  for (int m = 0; m <= order; ++m) Pbar[m] = P[m].conj();
  ComplexSeries PP = P * Pbar;
  RadialSeries F1(order, bits);
  for (int m = 1; m <= order; ++m) F1[m] = PP[m - 1].re();
  RadialSeries g1(order, bits);
  {
    ComplexSeries lg = complex_log_unit(P);
    Real two_pi = Real::pi(bits) * 2L;
    for (int m = 0; m <= order; ++m) g1[m] = lg[m].im() / two_pi;
  }

  // conjugacy pieces for a given completion of the radial/angular target
  auto conjugate_to = [&](const RadialSeries& F1full, const RadialSeries& g1full,
                          RadialSeries* aH_out, RadialSeries* gamma_out) {
    RadialSeries comp = F1full;
    comp[1] = comp[1] - Real(1L, bits);
    comp[r + 1] = comp[r + 1] + b;
    comp[2 * r + 1] = comp[2 * r + 1] - c;
    OneDimConjugacy oc = one_dim_conjugacy(F2, order, &comp);
    RadialSeries rhs = beta.compose(oc.phi) - g1full;
    *gamma_out = solve_gamma(OneDimMap{F1full, b, r}, rhs, order);
    RadialSeries ratio = div_by_t(oc.phi);  // phi/t, constant term 1
    ratio[0] = ratio[0] - Real(1L, bits);
    *aH_out = pow1p_series(ratio, Real(0.5, bits));
    return oc.phi;
  };

  // certification in the bivariate ring at order 2*order
  auto certify = [&](const ComplexSeries& Ptarget, const RadialSeries& aH,
                     const RadialSeries& gamma) {
    int N = 2 * order;
    Complex lam = n2.mult.lambda();
    auto embed = [&](const RadialSeries& s) {
      BiSeries e(N, bits, true);
      for (int m = 1; m <= s.order() && 2 * m <= N; ++m)
        e.at(m, m) = Complex(s[m], Real(bits));
      return e;
    };
    auto widen = [&](const ComplexSeries& s) {
      ComplexSeries e(N, bits);
      for (int m = 0; m <= std::min(N, s.order()); ++m) e[m] = s[m];
      return e;
    };
    BiSeries Hz =
        embed(gamma).exp_2pii().mul_radial(widen(to_complex(one_plus(aH)))).shifted(1, 0);
    BiSeries N1z = BiSeries::monomial(1, 0, Complex(Real(1L, bits), Real(bits)), N, bits)
                       .mul_radial(widen(Ptarget))
                       .scaled(lam);
    BiSeries N2z = embed(beta)
                       .exp_2pii()
                       .mul_radial(widen(to_complex(one_plus(alpha))))
                       .shifted(1, 0)
                       .scaled(lam);
    BiSeries lhs = Hz.substitute(N1z, N1z.conj_flip());
    BiSeries rhs = N2z.substitute(Hz, Hz.conj_flip());
    return (lhs - rhs).max_abs();
  };

  RadialSeries aH(order, bits), gamma(order, bits);
  out.phi1d = conjugate_to(F1, g1, &aH, &gamma);
  out.a_H = aH;
  out.gamma = gamma;
  out.residual = certify(P, aH, gamma);

  // split target: N = lambda z Q(u) e^{2 pi i G(u)}
  RadialSeries F1s = mul_by_t(Q * Q);
  RadialSeries aHs(order, bits), gammas(order, bits);
  conjugate_to(F1s, G, &aHs, &gammas);
  ComplexSeries Ps = to_complex(Q) * expc_2pii(G);
  out.residual_split = certify(Ps, aHs, gammas);

  return out;
}

RcReport rc_classify(const GaugeMap& H, const BiSeries& phi) {
  auto estimate = [](const std::vector<double>& logmag) {
    GrowthEstimate g;
    std::vector<std::pair<double, double>> pts;  // (log l, log|c_l| / l)
    for (size_t l = 2; l < logmag.size(); ++l) {
      if (!std::isfinite(logmag[l])) continue;
      pts.emplace_back(std::log(static_cast<double>(l)), logmag[l] / static_cast<double>(l));
    }
    g.used = static_cast<int>(pts.size());
    if (pts.size() < 3) return g;  // too sparse: polynomial-like, RC
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) { sx += x; sy += y; sxx += x * x; sxy += x * y; }
    double n = static_cast<double>(pts.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    g.slope = slope;
    g.rc = slope < 0.5;  // factorial growth has slope ~ 1, geometric ~ 0
    g.radius = g.rc ? std::exp(-pts.back().second) : 0.0;
    return g;
  };

  auto radial_logs = [](const RadialSeries& s) {
    std::vector<double> v(s.order() + 1, -std::numeric_limits<double>::infinity());
    for (int m = 0; m <= s.order(); ++m)
      if (!s[m].is_zero()) v[m] = log(abs(s[m])).d();
    return v;
  };

  RcReport rep;
  std::vector<double> ga = radial_logs(H.a), gb = radial_logs(H.b);
  std::vector<double> joined(std::max(ga.size(), gb.size()),
                             -std::numeric_limits<double>::infinity());
  for (size_t i = 0; i < joined.size(); ++i) {
    if (i < ga.size()) joined[i] = std::max(joined[i], ga[i]);
    if (i < gb.size()) joined[i] = std::max(joined[i], gb[i]);
  }
  rep.gauge = estimate(joined);

  std::vector<double> pl(phi.order() + 1, -std::numeric_limits<double>::infinity());
  for (int l = 0; l <= phi.order(); ++l) {
    Real m = phi.max_abs_at_degree(l);
    if (!m.is_zero()) pl[l] = log(m).d();
  }
  rep.phi = estimate(pl);
  return rep;
}

bool preserves_foliation(const BiSeries& Kz, const Real& tol) {
  BiSeries mod = Kz * Kz.conj_flip();
  for (int l = 0; l <= mod.order(); ++l)
    for (int j = 0; j <= l; ++j)
      if (j != l - j && mod.at(j, l - j).abs() > tol) return false;
  return true;
}

}  // namespace circlenf
