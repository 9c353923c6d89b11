#include "circlenf/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace circlenf {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kEscapeRadius = 0.75;

struct BiPoly;

// double-precision view of a map: family closed forms, series fallback
struct DMap {
  Family tag;
  double omega, modulus;
  std::vector<double> f;  // radial coefficients
  std::function<double(cplx)> gpoly;  // custom angular part
};

double eval_f(const DMap& m, double u) {
  double acc = 0;
  for (size_t s = m.f.size(); s-- > 1;) acc = acc * u + m.f[s];
  return acc * u;
}

// monomial table with incremental power evaluation (hot path: orbit sums)
struct BiPoly {
  struct Term { int p, q; cplx c; };
  std::vector<Term> terms;
  int max_p = 0, max_q = 0;
  void add(int p, int q, cplx c) {
    terms.push_back({p, q, c});
    max_p = std::max(max_p, p);
    max_q = std::max(max_q, q);
  }
  double operator()(cplx w) const {
    if (terms.empty()) return 0.0;
    cplx wp[64], wq[64];
    cplx wb = std::conj(w);
    wp[0] = wq[0] = 1.0;
    for (int i = 1; i <= max_p; ++i) wp[i] = wp[i - 1] * w;
    for (int i = 1; i <= max_q; ++i) wq[i] = wq[i - 1] * wb;
    cplx acc = 0;
    for (auto& t : terms) acc += t.c * wp[t.p] * wq[t.q];
    return acc.real();
  }
};

BiPoly compile_bipoly(const BiSeries& s) {
  BiPoly b;
  for (int l = 0; l <= s.order(); ++l)
    for (int j = 0; j <= l; ++j) {
      const Complex& c = s.at(j, l - j);
      if (!c.is_zero()) b.add(j, l - j, cplx(c.re().d(), c.im().d()));
    }
  return b;
}

double gval(const DMap& m, cplx w) {
  double u = std::norm(w);
  switch (m.tag) {
    case Family::A:
      return w.imag();
    case Family::B:
      return u * (1.0 + w.imag());
    case Family::C:
      return u * (1.0 + std::exp(w.real()) * std::sin(w.imag()));
    case Family::Custom:
    default:
      return m.gpoly(w);
  }
}

DMap compile(const FoliationMap& F) {
  DMap m;
  m.tag = F.tag;
  m.omega = F.mult.omega().d();
  m.modulus = F.mult.modulus().d();
  m.f.resize(F.f.order() + 1, 0.0);
  for (int s = 0; s <= F.f.order(); ++s) m.f[s] = F.f[s].d();
  if (F.tag == Family::Custom) m.gpoly = compile_bipoly(F.g);
  return m;
}

cplx step(const DMap& m, cplx w) {
  double u = std::norm(w);
  double rad = m.modulus * (1.0 + eval_f(m, u));
  double ang = m.omega + gval(m, w);
  return w * rad * std::polar(1.0, kTwoPi * ang);
}

double radial_step(const DMap& m, double r) {
  return m.modulus * r * (1.0 + eval_f(m, r * r));
}

// polynomial in u = r^2 from a radial series, evaluated in double
std::vector<double> radial_coeffs(const RadialSeries& s) {
  std::vector<double> c(s.order() + 1, 0.0);
  for (int m = 0; m <= s.order(); ++m) c[m] = s[m].d();
  return c;
}

double poly_eval(const std::vector<double>& c, double u) {
  double acc = 0;
  for (size_t s = c.size(); s-- > 0;) acc = acc * u + c[s];
  return acc;
}

}  // namespace

double model_nu(int p, double atilde, double r, long m) {
  return r * std::pow(1.0 + static_cast<double>(m) * atilde * std::pow(r, p), -1.0 / p);
}

cplx iterate(const FoliationMap& F, cplx z, long m) {
  if (m < 0) throw Error("dynamics", "bad_iterate", "m must be >= 0");
  DMap dm = compile(F);
  for (long i = 0; i < m; ++i) {
    z = step(dm, z);
    if (std::abs(z) > kEscapeRadius)
      throw Error("dynamics", "escape", "orbit left the validity disk");
  }
  return z;
}

double radial_iterate(const FoliationMap& F, double r, long m) {
  if (m < 0) throw Error("dynamics", "bad_iterate", "m must be >= 0");
  DMap dm = compile(F);
  for (long i = 0; i < m; ++i) {
    r = radial_step(dm, r);
    if (r > kEscapeRadius)
      throw Error("dynamics", "escape", "radius left the validity disk");
  }
  return r;
}

ContractionBounds contraction_bounds(const FoliationMap& F, double a_minus, double a_plus) {
  int bits = F.g.bits();
  Real tol = tolerance_of(bits);
  int d = F.f.valuation(tol);
  if (d < 0) throw Error("dynamics", "not_contracting", "f vanishes identically");
  double a = F.f[d].d();
  if (a >= 0)
    throw Error("dynamics", "not_contracting", "leading f coefficient must be negative");
  double mid = 2.0 * d * std::fabs(a);
  if (!(a_minus > 0) || !(a_minus < mid) || !(a_plus > mid))
    throw Error("dynamics", "bad_bounds",
                "need 0 < a_minus < 2d|a| < a_plus");

  ContractionBounds out;
  out.d = d;
  out.a_minus = a_minus;
  out.a_plus = a_plus;

  DMap dm = compile(F);
  int p = 2 * d;
  auto holds = [&](double r) {
    double nu = radial_step(dm, r);
    return model_nu(p, a_plus, r) <= nu && nu <= model_nu(p, a_minus, r) && nu < r;
  };
  // largest validity radius for the one-step sandwich
  double lo = 0, hi = kEscapeRadius;
  if (!holds(1e-3))
    throw Error("dynamics", "bad_bounds", "sandwich fails near the origin");
  for (int it = 0; it < 60; ++it) {
    double midr = 0.5 * (lo + hi);
    if (holds(midr)) lo = midr; else hi = midr;
  }
  out.r0 = lo * 0.999;  // safety margin inside the bisected boundary

  out.C = std::pow(a_minus, -1.0 / p);
  out.K = 1.0;
  out.D = std::pow(1.0 + a_plus, -1.0 / p);

  // certification grid: iterated sandwich and the Lemma-style tail bounds
  out.certified = true;
  out.worst_gap = 1e300;
  std::vector<long> ms = {1, 2, 5, 10, 50, 100, 1000, 10000, 100000};
  for (int i = 1; i <= 16; ++i) {
    double r = out.r0 * i / 16.0;
    double cur = r;
    long done = 0;
    for (long m : ms) {
      for (long k = done; k < m; ++k) cur = radial_step(dm, cur);
      done = m;
      double up = model_nu(p, a_minus, r, m), dn = model_nu(p, a_plus, r, m);
      double gap = std::min(up - cur, cur - dn);
      out.worst_gap = std::min(out.worst_gap, gap);
      if (cur < dn || cur > up || cur >= r) out.certified = false;
      if (cur > out.C * std::pow(static_cast<double>(m), -1.0 / p)) out.certified = false;
      if (m >= out.K * std::pow(r, -p) &&
          cur < out.D * std::pow(static_cast<double>(m), -1.0 / p))
        out.certified = false;
    }
  }
  return out;
}

NeumannRun neumann_run(const FoliationMap& F, const RadialSeries& n, cplx z,
                       const std::vector<long>& M_ladder) {
  if (M_ladder.empty())
    throw Error("dynamics", "bad_ladder", "need at least one ladder entry");
  for (size_t i = 1; i < M_ladder.size(); ++i)
    if (M_ladder[i] <= M_ladder[i - 1])
      throw Error("dynamics", "bad_ladder", "ladder must be strictly increasing");

  // reduction jet: the basic normalization truncated at a fixed small order,
  // plus a radial corrector absorbing the removable part of the torsion
  // mismatch (obstructed only through the contraction degree d)
  int J = std::min(12, F.g.order());
  int bits = F.g.bits();
  BiPoly P;
  if (z != cplx()) {
    Normalization nor = solve_homological(F, J, Gauge::basic());
    P = compile_bipoly(nor.phi);

    Real tol = tolerance_of(bits);
    int d = F.f.valuation(tol);
    int K = nor.n.order();
    std::vector<Real> R(K + 1, Real(0.0, bits));  // n* - n, removable target
    for (int k = 1; k <= K; ++k) {
      R[k] = nor.n[k];
      if (k <= n.order()) R[k] = R[k] - n[k];
    }
    std::vector<Real> psi(K + 1, Real(0.0, bits));
    bool weak = F.mult.weak();
    if (!(weak && d < 0)) {
      // c_{kj} = [u^{j-k}] V^k with V = modulus^2 (1+f)^2
      RadialSeries V(K, bits);
      V[0] = Real(1.0, bits);
      for (int s = 1; s <= std::min(K, F.f.order()); ++s) V[s] = F.f[s];
      V = (V * V).scaled(F.mult.modulus() * F.mult.modulus());
      std::vector<RadialSeries> Vp;
      RadialSeries one(K, bits);
      one[0] = Real(1.0, bits);
      Vp.push_back(one);
      for (int k = 1; k <= K; ++k) Vp.push_back(Vp.back() * V);
      auto c_of = [&](int k, int j) { return Vp[k][j - k]; };
      if (weak) {
        for (int j = d + 1; j <= K; ++j) {
          Real acc = R[j];
          for (int k = 1; k <= j - d - 1; ++k) acc += psi[k] * c_of(k, j);
          psi[j - d] = -acc / c_of(j - d, j);
        }
      } else {
        for (int j = 1; j <= K; ++j) {
          Real acc = R[j];
          for (int k = 1; k < j; ++k) acc += psi[k] * c_of(k, j);
          psi[j] = acc / (Real(1.0, bits) - c_of(j, j));
        }
      }
    }
    for (int k = 1; k <= K; ++k)
      if (!psi[k].is_zero()) P.add(k, k, cplx(psi[k].d(), 0.0));
  }

  DMap dm = compile(F);
  std::vector<double> nc = radial_coeffs(n);

  NeumannRun run;
  double S = 0;
  cplx w = z;
  long done = 0;
  for (long M : M_ladder) {
    for (long m = done; m < M; ++m) {
      cplx wn = step(dm, w);
      S += gval(dm, w) - poly_eval(nc, std::norm(w)) + P(wn) - P(w);
      w = wn;
    }
    done = M;
    run.ladder.push_back({M, cplx(S, 0.0)});
  }

  // deltas between consecutive ladder sums drive the verdict
  std::vector<double> deltas;
  for (size_t i = 1; i < run.ladder.size(); ++i)
    deltas.push_back(std::abs(run.ladder[i].S - run.ladder[i - 1].S));

  double slope = 0;
  int used = 0;
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < deltas.size(); ++i) {
      if (deltas[i] <= 0) continue;
      double x = std::log(static_cast<double>(M_ladder[i + 1]));
      double y = std::log(deltas[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++used;
    }
    if (used >= 2) slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
  }
  run.exponent = slope;

  bool all_tiny = true;
  for (double dl : deltas) all_tiny = all_tiny && dl < 1e-14;
  bool last3 = deltas.size() >= 3;
  for (size_t i = deltas.size() >= 3 ? deltas.size() - 3 : 0; i < deltas.size(); ++i)
    last3 = last3 && deltas[i] < 1e-8;
  // monotone drift: consecutive same-signed, non-vanishing increments
  int mono = 0, best = 0;
  for (size_t i = 1; i < run.ladder.size(); ++i) {
    double d0 = i >= 2 ? run.ladder[i - 1].S.real() - run.ladder[i - 2].S.real() : 0;
    double d1 = run.ladder[i].S.real() - run.ladder[i - 1].S.real();
    if (std::fabs(d1) > 1e-13 && (i < 2 || d0 * d1 > 0)) ++mono; else mono = 0;
    best = std::max(best, mono);
  }

  if (all_tiny || (last3 && run.exponent < -1.0))
    run.verdict = "converged";
  else if (best >= 4 && run.exponent >= -1.0)
    run.verdict = "diverging";
  else
    run.verdict = "inconclusive";
  return run;
}

namespace {

// inverse of the radial map: x with nu(x) = target, bisection on [target, hi]
double nu_inverse(const DMap& dm, double target) {
  double lo = target, hi = std::min(kEscapeRadius, target * 2.0 + 1e-3);
  if (radial_step(dm, hi) < target) hi = kEscapeRadius;
  for (int it = 0; it < 200 && radial_step(dm, hi) < target; ++it) hi *= 1.05;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (radial_step(dm, mid) < target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// angular lift of the map at pre-image radius r: theta -> theta + omega + g_r
// solve lift(x) = target (mod 1), returning x near target - omega
double angle_inverse(const FoliationMap& F, const DMap& dm, double r, double target) {
  auto lift = [&](double th) { return th + dm.omega + polar_angular(F, r, th); };
  double guess = target - dm.omega;
  double k = std::round(lift(guess) - target);
  double lo = guess - 0.6, hi = guess + 0.6;
  for (int it = 0; it < 200 && lift(lo) - target - k > 0; ++it) lo -= 0.2;
  for (int it = 0; it < 200 && lift(hi) - target - k < 0; ++it) hi += 0.2;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (lift(mid) - target - k < 0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

cplx sternberg_eval(const FoliationMap& F, const FoliationMap& N, cplx z, double r0) {
  int bits = F.g.bits();
  Real tol = tolerance_of(bits) * Real(1000L, bits);
  if ((F.f.truncated(std::min(F.f.order(), N.f.order())) -
       N.f.truncated(std::min(F.f.order(), N.f.order())))
          .max_abs() > tol)
    throw Error("dynamics", "not_special", "N must share the radial part of F");
  for (int l = 0; l <= N.g.order(); ++l)
    for (int j = 0; j <= l; ++j)
      if (j != l - j && N.g.at(j, l - j).abs() > tol)
        throw Error("dynamics", "not_rotation_commuting",
                    "N must commute with rotations (diagonal angular part)");

  double rho = std::abs(z);
  if (rho > r0 * (1 + 1e-12))
    throw Error("dynamics", "outside_disk", "point lies outside the C0 disk");
  if (rho == 0.0) return z;

  DMap dm = compile(F);
  // torsion polynomial of N in u = r^2 (diagonal angular coefficients)
  std::vector<double> ncoef(N.g.order() / 2 + 1, 0.0);
  for (int s = 1; 2 * s <= N.g.order(); ++s) ncoef[s] = N.g.at(s, s).re().d();
  auto n_of = [&](double r) {
    double u = r * r, acc = 0;
    for (size_t s = ncoef.size(); s-- > 1;) acc = acc * u + ncoef[s];
    return acc * u;
  };

  double r1 = radial_step(dm, r0);
  double theta = std::atan2(z.imag(), z.real()) / kTwoPi;

  // pull back to the fundamental annulus A0 = {r1 <= |w| <= r0}
  std::vector<double> radii = {rho};
  int nsteps = 0;
  while (rho < r1 * (1 - 1e-15)) {
    rho = nu_inverse(dm, rho);
    theta = angle_inverse(F, dm, rho, theta);
    radii.push_back(rho);
    if (++nsteps > 1000000)
      throw Error("dynamics", "too_deep", "annulus index exceeds the iteration budget");
  }

  // interpolated angle map on A0: identity on C0, lift of N∘F^{-1} on C1
  double s = (r0 - rho) / (r0 - r1);
  s = std::clamp(s, 0.0, 1.0);
  auto L = [&](double th) { return angle_inverse(F, dm, r0, th) + dm.omega + n_of(r0); };
  double prev = L(theta - 0.5);
  for (int i = 1; i <= 8; ++i) {  // fiber monotonicity spot check
    double cur = L(theta - 0.5 + i / 8.0);
    if (cur <= prev)
      throw Error("dynamics", "not_monotone", "interpolated fiber map is not increasing");
    prev = cur;
  }
  theta = (1.0 - s) * theta + s * L(theta);

  // push forward through N, reusing the recorded pullback radii exactly
  for (int k = nsteps; k >= 1; --k) {
    theta += dm.omega + n_of(radii[k]);
    rho = radii[k - 1];
  }
  return std::polar(rho, kTwoPi * theta);
}

RotationResult rotation_number(const std::function<double(double)>& lift, double theta0,
                               long iterations, double tol) {
  const int G = 257;
  double prev = lift(0.0);
  if (std::fabs((lift(1.0) - lift(0.0)) - 1.0) > 1e-9)
    throw Error("dynamics", "bad_lift", "lift must satisfy lift(x+1) = lift(x) + 1");
  for (int i = 1; i < G; ++i) {
    double cur = lift(static_cast<double>(i) / G);
    if (cur <= prev)
      throw Error("dynamics", "not_monotone", "lift is not strictly increasing");
    prev = cur;
  }

  long M = std::max<long>(iterations, 16);
  long q1 = M / 4, q2 = M / 2;
  double th = theta0;
  double rho_q1 = 0, rho_q2 = 0, rho_M = 0;
  for (long i = 1; i <= M; ++i) {
    th = lift(th);
    if (i == q1) rho_q1 = (th - theta0) / static_cast<double>(i);
    if (i == q2) rho_q2 = (th - theta0) / static_cast<double>(i);
  }
  rho_M = (th - theta0) / static_cast<double>(M);

  double r_prev = 2 * rho_q2 - rho_q1;  // Richardson pair
  double r_last = 2 * rho_M - rho_q2;
  RotationResult out;
  out.error_est = std::fabs(r_last - r_prev);
  out.converged = out.error_est <= tol;
  out.rho = r_last - std::floor(r_last);
  return out;
}

namespace {

// min / max over theta of lift^q(theta) - theta - p, on a grid with a
// parabolic refinement of the extreme cells
std::pair<double, double> orbit_extrema(const std::function<double(double)>& lift, int q,
                                        int p) {
  const int G = 2048;
  auto psi = [&](double th) {
    double x = th;
    for (int i = 0; i < q; ++i) x = lift(x);
    return x - th - p;
  };
  double mn = 1e300, mx = -1e300;
  int imn = 0, imx = 0;
  std::vector<double> vals(G);
  for (int i = 0; i < G; ++i) {
    vals[i] = psi(static_cast<double>(i) / G);
    if (vals[i] < mn) { mn = vals[i]; imn = i; }
    if (vals[i] > mx) { mx = vals[i]; imx = i; }
  }
  auto refine = [&](int idx, bool want_min) {
    double h = 1.0 / G;
    double x0 = idx * h;
    double ym = psi(x0 - h), y0 = vals[idx], yp = psi(x0 + h);
    double den = ym - 2 * y0 + yp;
    if (std::fabs(den) < 1e-300) return y0;
    double dx = 0.5 * (ym - yp) / den * h;
    double y = psi(x0 + std::clamp(dx, -h, h));
    return want_min ? std::min(y, y0) : std::max(y, y0);
  };
  return {refine(imn, true), refine(imx, false)};
}

void detect_plateaus(TongueScan& scan,
                     const std::function<std::function<double(double)>(double)>& lift_at,
                     int q_max, double tol) {
  if (scan.grid.size() < 2) return;
  double glo = scan.grid.front(), ghi = scan.grid.back();
  for (int q = 1; q <= q_max; ++q) {
    for (int p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      double target = static_cast<double>(p) / q;
      // locked(x): lift^q has a fixed point shifted by p
      auto locked = [&](double x) {
        auto [mn, mx] = orbit_extrema(lift_at(x), q, p);
        return mn <= 0 && mx >= 0;
      };
      // find sign structure on the scan grid, bisect each transition
      std::vector<char> lk(scan.grid.size());
      bool any = false, all = true;
      for (size_t i = 0; i < scan.grid.size(); ++i) {
        // cheap pre-filter: rho must be near p/q for locking to be possible;
        // distance taken on the circle so estimates straddling 0 == 1 match
        double dist = std::fabs(scan.rho[i] - target);
        dist = std::min(dist, 1.0 - dist);
        lk[i] = dist < 0.55 / q ? (locked(scan.grid[i]) ? 1 : 0) : 0;
        any = any || lk[i];
        all = all && lk[i];
      }
      if (!any) continue;
      auto bisect_edge = [&](double in, double out) {
        for (int it = 0; it < 60 && std::fabs(out - in) > tol; ++it) {
          double mid = 0.5 * (in + out);
          if (locked(mid)) in = mid; else out = mid;
        }
        return in;
      };
      // group consecutive locked cells into plateaus
      size_t i = 0;
      while (i < lk.size()) {
        if (!lk[i]) { ++i; continue; }
        size_t j = i;
        while (j + 1 < lk.size() && lk[j + 1]) ++j;
        Plateau pl;
        pl.p = p;
        pl.q = q;
        pl.lo = i == 0 ? glo : bisect_edge(scan.grid[i], scan.grid[i - 1]);
        pl.hi = j + 1 == lk.size() ? ghi : bisect_edge(scan.grid[j], scan.grid[j + 1]);
        scan.plateaus.push_back(pl);
        i = j + 1;
      }
      (void)all;
    }
  }
}

}  // namespace

TongueScan tongue_scan_arnold(const std::vector<double>& s_grid, double t, int q_max,
                              double tol) {
  if (t < 0 || kTwoPi * t >= 1.0)
    throw Error("dynamics", "bad_slice", "need 0 <= 2 pi t < 1 for a monotone slice");
  TongueScan scan;
  scan.arnold = true;
  scan.t = t;
  scan.grid = s_grid;
  auto lift_at = [t](double s) {
    return std::function<double(double)>(
        [s, t](double th) { return th + s + t * std::sin(kTwoPi * th); });
  };
  for (double s : s_grid)
    scan.rho.push_back(rotation_number(lift_at(s), 0.0, 4096, 1e-5).rho);
  detect_plateaus(scan, lift_at, q_max, tol);
  return scan;
}

TongueScan tongue_scan_family(const FoliationMap& F, const std::vector<double>& r_grid,
                              int q_max, double tol) {
  TongueScan scan;
  scan.arnold = false;
  scan.grid = r_grid;
  auto lift_at = [&F](double r) { return polar_components(F, r).lift; };
  for (double r : r_grid)
    scan.rho.push_back(rotation_number(lift_at(r), 0.0, 4096, 1e-5).rho);
  detect_plateaus(scan, lift_at, q_max, tol);
  return scan;
}

}  // namespace circlenf
