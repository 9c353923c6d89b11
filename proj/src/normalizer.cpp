#include "circlenf/normalizer.hpp"

#include <algorithm>
#include <utility>

namespace circlenf {

const char* gauge_name(GaugeKind k) {
  switch (k) {
    case GaugeKind::Basic: return "basic";
    case GaugeKind::KillTorsionAboveD: return "kill-torsion";
    case GaugeKind::CustomDiagonal: return "custom-diagonal";
    case GaugeKind::StrongContraction: return "strong";
  }
  return "basic";
}

GaugeKind gauge_from_name(const std::string& s) {
  if (s == "basic") return GaugeKind::Basic;
  if (s == "kill-torsion") return GaugeKind::KillTorsionAboveD;
  if (s == "custom-diagonal") return GaugeKind::CustomDiagonal;
  if (s == "strong") return GaugeKind::StrongContraction;
  throw Error("normalizer", "bad_gauge", "unknown gauge: " + s);
}

namespace {

Complex one_c(int bits) { return Complex(Real(1L, bits), Real(bits)); }

struct CoreOut {
  BiSeries phi;
  ComplexSeries n;
  std::vector<std::pair<int, Real>> sd_log;
  std::vector<int> near_degrees;
};

// The equation at coefficient (p,q) reads
//     g_pq + [sum phi_jk z^j zbar^k (W_jk - 1)]_pq = (p==q ? n_s : 0),
// with W_jk = mu_jk (1+f)^{j+k} e^{2 pi i (j-k) g},  mu_jk = lambda^j conj(lambda)^k.
// ACC accumulates the solved-phi contributions; a phi set at degree l only
// feeds coefficients of strictly higher degree (weak case), so degrees are
// processed in order and read ACC before writing into it.
CoreOut solve_core(const Complex& lambda, const ComplexSeries& f, const BiSeries& g,
                   int order, const Gauge& gauge, bool weak, bool real_coeffs) {
  const int N = order;
  const int bits = g.bits();
  const Real tol = tolerance_of(bits);
  const Real near_thresh = pow2(-bits / 4, bits);
  const Real exact_thresh = pow2(-bits + 16, bits);
  const Complex one = one_c(bits);

  // torsion valuation, needed by KillTorsionAboveD
  int fval = -1;
  {
    Real scale = f.max_abs();
    if (scale < Real(1L, bits)) scale = Real(1L, bits);
    for (int s = 1; s <= f.order(); ++s)
      if (f[s].abs() > tol * scale) { fval = s; break; }
  }
  if (gauge.kind == GaugeKind::KillTorsionAboveD) {
    if (!weak)
      throw Error("normalizer", "gauge_mismatch",
                  "kill-torsion gauge assumes a weak contraction (|lambda| = 1)");
    if (fval < 0)
      throw Error("normalizer", "kill_torsion_conservative",
                  "f vanishes identically: the torsion is uniquely determined "
                  "and cannot be killed");
  }

  // radial powers (1+f)^m, coefficient index = power of u = |z|^2
  const int ru = N / 2 + 1;  // u-coefficients that can matter
  std::vector<ComplexSeries> Ppow(N + 1, ComplexSeries(ru, bits));
  Ppow[0][0] = one;
  ComplexSeries onepf(ru, bits);
  onepf[0] = one;
  for (int s = 1; s <= std::min(ru, f.order()); ++s) onepf[s] = f[s];
  for (int m = 1; m <= N; ++m) Ppow[m] = Ppow[m - 1] * onepf;

  // angular powers e^{2 pi i m g}, m = -N..N  (index m+N)
  std::vector<BiSeries> Epow(2 * N + 1, BiSeries(N, bits));
  BiSeries Eplus = g.exp_2pii();
  BiSeries Eminus = real_coeffs ? Eplus.conj_flip() : g.scaled(Real(-1.0, bits)).exp_2pii();
  Epow[N] = BiSeries::monomial(0, 0, one, N, bits);
  for (int m = 1; m <= N; ++m) {
    Epow[N + m] = Epow[N + m - 1] * Eplus;
    Epow[N - m] = Epow[N - m + 1] * Eminus;
  }

  std::vector<Complex> lamp(N + 1, one), lamq(N + 1, one);
  for (int j = 1; j <= N; ++j) {
    lamp[j] = lamp[j - 1] * lambda;
    lamq[j] = lamq[j - 1] * lambda.conj();
  }

  CoreOut out{BiSeries(N, bits), ComplexSeries(N / 2, bits), {}, {}};
  BiSeries acc(N, bits);

  // contribution of phi_jk to ACC: phi * z^j zbar^k (W_jk - 1)
  auto deposit = [&](int j, int k, const Complex& phi) {
    if (phi.abs() < pow2(-2 * bits, bits)) return;
    int rest = N - j - k;
    const Complex mu = lamp[j] * lamq[k];
    const BiSeries& E = Epow[N + (j - k)];
    const ComplexSeries& P = Ppow[j + k];
    for (int l = 0; l <= rest; ++l) {
      for (int a = 0; a <= l; ++a) {
        int b = l - a;
        Complex w(bits);
        for (int s = 0; s <= std::min(a, b) && s < static_cast<int>(ru); ++s)
          w = w + P[s] * E.at(a - s, b - s);
        w = mu * w;
        if (a == 0 && b == 0) w = w - one;
        if (!w.is_zero()) acc.at(j + a, k + b) = acc.at(j + a, k + b) + phi * w;
      }
    }
  };

  for (int l = 1; l <= N; ++l) {
    Real sd_min(bits);
    bool sd_seen = false;
    bool near = false;

    // off-diagonal coefficients at this degree
    std::vector<std::pair<int, Complex>> solved;  // (j, phi_{j, l-j})
    for (int j = 0; j <= l; ++j) {
      int k = l - j;
      if (j == k) continue;
      Complex div = lamp[j] * lamq[k] - one;
      Real mag = div.abs();
      if (!sd_seen || mag < sd_min) { sd_min = mag; sd_seen = true; }
      if (mag < exact_thresh)
        throw Error("normalizer", "exact_resonance",
                    "resonant multiplier at degree " + std::to_string(l));
      if (mag < near_thresh) near = true;
      Complex res = g.at(j, k) + acc.at(j, k);
      Complex phi = (-res) / div;
      out.phi.at(j, k) = phi;
      solved.emplace_back(j, phi);
    }

    // diagonal: the gauge picks phi_{ss}; n_s is read afterwards
    if (l % 2 == 0) {
      int s = l / 2;
      Complex mu_ss = lamp[s] * lamq[s];
      switch (gauge.kind) {
        case GaugeKind::Basic:
          break;  // phi_ss = 0
        case GaugeKind::CustomDiagonal:
          if (s - 1 < static_cast<int>(gauge.diagonal.size())) {
            Complex v(Real(gauge.diagonal[s - 1], bits), Real(bits));
            out.phi.at(s, s) = v;
            deposit(s, s, v);
          }
          break;
        case GaugeKind::StrongContraction: {
          Complex div = mu_ss - one;
          if (!sd_seen || div.abs() < sd_min) { sd_min = div.abs(); sd_seen = true; }
          if (div.abs() < exact_thresh)
            throw Error("normalizer", "exact_resonance",
                        "unit-modulus diagonal at degree " + std::to_string(l));
          Complex res = g.at(s, s) + acc.at(s, s);
          Complex v = (-res) / div;
          out.phi.at(s, s) = v;
          deposit(s, s, v);
          break;
        }
        case GaugeKind::KillTorsionAboveD:
          if (s > fval) {
            // pending lower-degree diagonal coefficient, aimed at n_s = 0
            int jj = s - fval;
            Complex kappa = Ppow[2 * jj][fval];  // mu_{jj,jj} = 1 here
            if (kappa.abs() < tol)
              throw Error("normalizer", "kill_torsion_singular",
                          "degenerate diagonal coefficient at degree " + std::to_string(l));
            Complex res = g.at(s, s) + acc.at(s, s);
            Complex v = (-res) / kappa;
            out.phi.at(jj, jj) = v;
            deposit(jj, jj, v);
          }
          break;
      }
      out.n[s] = g.at(s, s) + acc.at(s, s);
    }

    for (auto& [j, phi] : solved) deposit(j, l - j, phi);

    if (sd_seen) out.sd_log.emplace_back(l, sd_min);
    if (near) out.near_degrees.push_back(l);
  }
  return out;
}

BiSeries embed_radial(const RadialSeries& n, int order, int bits) {
  BiSeries r(order, bits, true);
  for (int s = 1; 2 * s <= order && s <= n.order(); ++s)
    r.at(s, s) = Complex(n[s], Real(bits));
  return r;
}

Real verify_impl(const FoliationMap& F, const BiSeries& phi, const RadialSeries& n,
                 int order) {
  const int bits = F.g.bits();
  auto [Fz, Fzbar] = as_series(F);
  Fz = Fz.truncated(order);
  Fzbar = Fzbar.truncated(order);

  BiSeries Phi = phi.truncated(order).exp_2pii().shifted(1, 0);
  BiSeries lhs = Phi.substitute(Fz, Fzbar);

  ComplexSeries onepf = to_complex(F.f.truncated(order));
  onepf[0] = one_c(bits);
  BiSeries Nz = embed_radial(n, order, bits)
                    .exp_2pii()
                    .mul_radial(onepf)
                    .shifted(1, 0)
                    .scaled(F.lambda());
  BiSeries rhs = Nz.substitute(Phi, Phi.conj_flip());

  return (lhs - rhs).max_abs();
}

}  // namespace

Normalization solve_homological(const FoliationMap& F, int order, const Gauge& gauge) {
  const int bits = F.g.bits();
  if (order < 1) throw Error("normalizer", "bad_order", "order must be >= 1");
  if (order > F.g.order())
    throw Error("normalizer", "order_exceeds_map",
                "map is truncated below the requested order");
  const bool weak = F.mult.weak();
  if (weak && !F.mult.irrational())
    throw Error("normalizer", "exact_resonance",
                "rational rotation number: exact resonances block the normalization");
  if (gauge.kind == GaugeKind::StrongContraction && weak)
    throw Error("normalizer", "gauge_mismatch",
                "strong-contraction gauge needs modulus < 1");

  CoreOut core = solve_core(F.lambda(), to_complex(F.f.truncated(order)),
                            F.g.truncated(order), order, gauge, weak, true);

  Normalization out{BiSeries(order, bits, true), RadialSeries(order / 2, bits),
                    gauge,  Real(bits),          std::move(core.sd_log),
                    std::move(core.near_degrees), Real(bits)};
  out.phi = core.phi;
  Real asym = out.phi.symmetrize();
  Real imres(bits);
  out.n = real_part(core.n, &imres);
  out.reality_residue = asym > imres ? asym : imres;
  out.residual = verify_impl(F, out.phi, out.n, order);
  return out;
}

Real verify_conjugacy(const FoliationMap& F, const Normalization& norm, int order) {
  return verify_impl(F, norm.phi, norm.n, order);
}

InitialForm tilde_g_initial_form(const FoliationMap& F, const Normalization& norm) {
  const int bits = F.g.bits();
  const int N = norm.phi.order();
  InitialForm out;
  out.mean = Real(bits);
  BiSeries gt = F.g.truncated(N) - embed_radial(norm.n, N, bits);
  Real scale = F.g.max_abs();
  if (scale < Real(1L, bits)) scale = Real(1L, bits);
  Real tol = tolerance_of(bits) * scale;
  int k = -1;
  for (int l = 1; l <= N; ++l)
    if (gt.max_abs_at_degree(l) > tol) { k = l; break; }
  if (k < 0) return out;  // g - n vanishes to this order
  out.found = true;
  out.k = k;
  out.fourier.assign(k, Complex(bits));
  for (int nu = 1; nu <= k; ++nu) {
    if ((k + nu) % 2 != 0) continue;
    int j = (k + nu) / 2;
    out.fourier[nu - 1] = gt.at(j, k - j);
  }
  if (k % 2 == 0) out.mean = gt.at(k / 2, k / 2).abs();
  return out;
}

ParametricFit parametric_normalization(const ParametricFamily& fam,
                                       const std::vector<Complex>& t_samples, int p,
                                       int q) {
  const int bits = fam.g0.bits();
  const int deg = p + q;
  const int m = static_cast<int>(t_samples.size());
  if (deg < 1) throw Error("normalizer", "bad_index", "need p + q >= 1");
  if (m < deg + 2)
    throw Error("normalizer", "too_few_samples",
                "need at least p+q+2 distinct samples");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if ((t_samples[i] - t_samples[j]).is_zero())
        throw Error("normalizer", "duplicate_samples", "t samples must be distinct");
  if (fam.mult.weak() && !fam.mult.irrational())
    throw Error("normalizer", "exact_resonance",
                "rational rotation number: exact resonances block the normalization");

  const bool weak = fam.mult.weak();
  const Complex lambda = fam.mult.lambda();
  ComplexSeries f0 = to_complex(fam.f0.truncated(deg));
  ComplexSeries f1 = to_complex(fam.f1.truncated(deg));
  BiSeries g0 = fam.g0.truncated(deg);
  BiSeries g1 = fam.g1.truncated(deg);

  ParametricFit fit;
  fit.p = p;
  fit.q = q;

  std::vector<Complex> values;
  values.reserve(m);
  for (const Complex& t : t_samples) {
    ComplexSeries ft(deg, bits);
    for (int s = 0; s <= deg; ++s) ft[s] = f0[s] + t * f1[s];
    BiSeries gt = g0 + g1.scaled(t);
    gt.set_real_flag(false);
    CoreOut core = solve_core(lambda, ft, gt, deg, Gauge::basic(), weak, false);
    values.push_back(p == q ? core.n[p] : core.phi.at(p, q));
    for (int d : core.near_degrees)
      if (d <= deg) fit.certified = false;
  }

  // least squares for a degree-(p+q) polynomial, by normal equations
  const int cols = deg + 1;
  std::vector<std::vector<Complex>> A(m, std::vector<Complex>(cols, Complex(bits)));
  for (int i = 0; i < m; ++i) {
    A[i][0] = one_c(bits);
    for (int c = 1; c < cols; ++c) A[i][c] = A[i][c - 1] * t_samples[i];
  }
  std::vector<std::vector<Complex>> G(cols, std::vector<Complex>(cols, Complex(bits)));
  std::vector<Complex> rhs(cols, Complex(bits));
  for (int a = 0; a < cols; ++a) {
    for (int b = 0; b < cols; ++b)
      for (int i = 0; i < m; ++i) G[a][b] = G[a][b] + A[i][a].conj() * A[i][b];
    for (int i = 0; i < m; ++i) rhs[a] = rhs[a] + A[i][a].conj() * values[i];
  }
  for (int c = 0; c < cols; ++c) {  // Gaussian elimination, partial pivoting
    int piv = c;
    for (int r = c + 1; r < cols; ++r)
      if (G[r][c].abs() > G[piv][c].abs()) piv = r;
    std::swap(G[c], G[piv]);
    std::swap(rhs[c], rhs[piv]);
    if (G[c][c].abs() < pow2(-2 * bits, bits))
      throw Error("normalizer", "singular_fit", "degenerate sample configuration");
    for (int r = c + 1; r < cols; ++r) {
      Complex fct = G[r][c] / G[c][c];
      for (int cc = c; cc < cols; ++cc) G[r][cc] = G[r][cc] - fct * G[c][cc];
      rhs[r] = rhs[r] - fct * rhs[c];
    }
  }
  fit.coeff.assign(cols, Complex(bits));
  for (int c = cols - 1; c >= 0; --c) {
    Complex s = rhs[c];
    for (int cc = c + 1; cc < cols; ++cc) s = s - G[c][cc] * fit.coeff[cc];
    fit.coeff[c] = s / G[c][c];
  }

  fit.residual = Real(bits);
  for (int i = 0; i < m; ++i) {
    Complex pred(bits);
    for (int c = cols - 1; c >= 0; --c) pred = pred * t_samples[i] + fit.coeff[c];
    Real err = (pred - values[i]).abs();
    if (err > fit.residual) fit.residual = err;
  }
  return fit;
}

}  // namespace circlenf
