// Acceptance gate: every release-blocking behavior, one line of output each.
// Tolerances are pinned here on purpose; do not loosen them to make a red
// line green — a red line is a finding.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "circlenf/cli.hpp"
#include "circlenf/diagnostics.hpp"
#include "circlenf/dynamics.hpp"
#include "circlenf/io.hpp"
#include "circlenf/normalizer.hpp"
#include "circlenf/transforms.hpp"
#include "testutil.hpp"

using namespace circlenf;
using testutil::Rng;

namespace {

const int kBits = 256;

struct Outcome {
  bool pass = true;
  std::string detail;
};

void expect(Outcome& o, bool cond, const std::string& what) {
  if (cond) return;
  o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what;
}

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Complex one_c() { return Complex(1.0, 0.0, kBits); }
Complex two_i() { return Complex(0.0, 2.0, kBits); }

double rel_err(const Complex& got, const Complex& want) {
  Real scale = want.abs();
  if (scale.d() < 1e-30) scale = Real(1.0, kBits);
  return ((got - want).abs() / scale).d();
}

FoliationMap family_map(Family fam, double a, int d, int order) {
  return make_family(fam, Multiplier::golden(kBits), Real(a, kBits), d, order, kBits);
}

std::vector<long> doubling(long m0, long m1) {
  std::vector<long> v;
  for (long m = m0; m <= m1; m *= 2) v.push_back(m);
  return v;
}

// --- 1 --------------------------------------------------------------------
Outcome golden_family_A() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto F = family_map(Family::A, -1.0, 1, 16);
  auto norm = solve_homological(F, 16, Gauge::basic());
  Complex lam = F.mult.lambda();
  Real pi = Real::pi(kBits);
  Complex pic(pi, Real(0.0, kBits));

  Complex want10 = one_c() / (two_i() * (one_c() - lam));
  Complex want20 =
      pic * lam / (two_i() * (one_c() - lam) * (one_c() - lam * lam));
  Real want_n1 = -(pic * lam / (one_c() - lam)).im();

  expect(o, rel_err(norm.phi.at(1, 0), want10) < 1e-30,
         "phi10 off by " + num(rel_err(norm.phi.at(1, 0), want10)));
  expect(o, rel_err(norm.phi.at(2, 0), want20) < 1e-30,
         "phi20 off by " + num(rel_err(norm.phi.at(2, 0), want20)));
  expect(o, (abs(norm.n[1] - want_n1) / abs(want_n1)).d() < 1e-30,
         "n1 off by " + num((abs(norm.n[1] - want_n1) / abs(want_n1)).d()));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  expect(o, secs < 10.0, "took " + num(secs) + " s (budget 10)");
  return o;
}

// --- 2 --------------------------------------------------------------------
Outcome golden_family_B() {
  Outcome o;
  Complex lam = Multiplier::golden(kBits).lambda();
  auto d3 = solve_homological(family_map(Family::B, -1.0, 3, 16), 16, Gauge::basic());
  for (int p : {1, 2, 3, 4})
    expect(o, d3.phi.at(p, 0).abs().d() < 1e-30,
           "phi" + std::to_string(p) + "0 = " + num(d3.phi.at(p, 0).abs().d()));
  expect(o, d3.phi.at(3, 1).abs().d() < 1e-30, "phi31 = " + num(d3.phi.at(3, 1).abs().d()));
  expect(o, abs(d3.n[1] - Real(1.0, kBits)).d() < 1e-30, "n1 != 1");
  Complex want21 = -(one_c() / (two_i() * (lam - one_c())));
  expect(o, rel_err(d3.phi.at(2, 1), want21) < 1e-30,
         "phi21 off by " + num(rel_err(d3.phi.at(2, 1), want21)));

  auto d2 = solve_homological(family_map(Family::B, -1.0, 2, 16), 16, Gauge::basic());
  expect(o, abs(d2.n[2]).d() < 1e-30, "d=2: n2 = " + num(d2.n[2].d()));
  expect(o, abs(d3.n[2]).d() < 1e-30, "d=3: n2 = " + num(d3.n[2].d()));

  Real want_n3 = (lam / (lam - one_c())).im();
  expect(o, (abs(d3.n[3] - want_n3) / abs(want_n3)).d() < 1e-30,
         "n3: got " + num(d3.n[3].d()) + " want " + num(want_n3.d()));
  return o;
}

// --- 3 --------------------------------------------------------------------
Outcome conjugacy_residuals() {
  Outcome o;
  auto check = [&](const FoliationMap& F, const std::string& tag) {
    auto norm = solve_homological(F, 16, Gauge::basic());
    Real res = verify_conjugacy(F, norm, 16);
    expect(o, res.d() < 1e-25, tag + ": residual " + num(res.d()));
  };
  check(family_map(Family::A, -1.0, 1, 16), "A");
  check(family_map(Family::B, -1.0, 1, 16), "B");
  check(family_map(Family::C, -1.0, 1, 16), "C");
  Rng rng(416);
  for (int i = 0; i < 10; ++i) {
    auto f = testutil::random_radial(rng, 16, kBits, 0.5);
    auto g = testutil::random_real_bi(rng, 16, kBits, 0.3);
    check(make_custom(Multiplier::golden(kBits), f, g), "custom#" + std::to_string(i));
  }
  return o;
}

// --- 4 --------------------------------------------------------------------
Outcome torsion_gauge_invariance() {
  Outcome o;
  Rng rng(417);
  auto check = [&](const FoliationMap& F, int d, const std::string& tag) {
    auto basic = solve_homological(F, 16, Gauge::basic());
    auto kt = solve_homological(F, 16, Gauge::kill_torsion());
    for (int s = 1; s <= d; ++s)
      expect(o, abs(basic.n[s] - kt.n[s]).d() < 1e-25,
             tag + ": kill-torsion moved n" + std::to_string(s));
    for (int i = 0; i < 10; ++i) {
      std::vector<double> diag(8);
      for (auto& x : diag) x = rng.sym();
      auto cd = solve_homological(F, 16, Gauge::custom_diagonal(diag));
      for (int s = 1; s <= d; ++s)
        expect(o, abs(basic.n[s] - cd.n[s]).d() < 1e-25,
               tag + ": diagonal gauge #" + std::to_string(i) + " moved n" +
                   std::to_string(s));
    }
  };
  check(family_map(Family::A, -1.0, 1, 16), 1, "A d=1");
  check(family_map(Family::B, -1.0, 2, 16), 2, "B d=2");
  return o;
}

// --- 5 --------------------------------------------------------------------
Outcome first_coefficient_invariance() {
  Outcome o;
  auto F = family_map(Family::A, -1.0, 1, 16);
  auto norm = solve_homological(F, 16, Gauge::basic());
  Real tol(1e-40, kBits);
  auto base = apply_gauge(norm.n, F.f, make_gauge_map(RadialSeries(16, kBits),
                                                      RadialSeries(16, kBits)),
                          F.mult, 16);
  int k0 = base.alpha.valuation(tol);
  Real a0 = base.alpha[k0];
  Rng rng(418);
  for (int i = 0; i < 50; ++i) {
    auto H = make_gauge_map(testutil::random_radial(rng, 16, kBits, 0.4),
                            testutil::random_radial(rng, 16, kBits, 0.4));
    auto nf = apply_gauge(norm.n, F.f, H, F.mult, 16);
    int k = nf.alpha.valuation(tol);
    expect(o, k == k0, "H#" + std::to_string(i) + ": valuation " + std::to_string(k));
    expect(o, abs(nf.alpha[k0] - a0).d() < 1e-20,
           "H#" + std::to_string(i) + ": alpha_k0 moved by " +
               num(abs(nf.alpha[k0] - a0).d()));
  }
  return o;
}

// --- 6 --------------------------------------------------------------------
Outcome polynomial_pipeline() {
  Outcome o;
  auto F = family_map(Family::A, -1.0, 1, 10);
  auto norm = solve_homological(F, 10, Gauge::basic());
  auto nf = apply_gauge(norm.n, F.f, make_gauge_map(RadialSeries(10, kBits),
                                                    RadialSeries(10, kBits)),
                        F.mult, 10);
  auto poly = polynomial_normal_form(nf, 10);
  int deg = 0;
  for (int k = 0; k <= poly.P.order(); ++k)
    if (poly.P[k].abs().d() > 1e-40) deg = k;
  expect(o, deg <= 2 * poly.r, "P degree " + std::to_string(deg) + " > 2r");
  expect(o, poly.residual.d() < 1e-20, "residual " + num(poly.residual.d()));
  expect(o, poly.residual_split.d() < 1e-20,
         "split residual " + num(poly.residual_split.d()));

  // the one-dimensional corrector solves its equation exactly in the jet
  RadialSeries F1(12, kBits);
  F1[1] = Real(1.0, kBits);
  F1[2] = Real(-2.0, kBits);
  F1[3] = Real(1.0, kBits);
  auto odm = one_dim_from_series(F1);
  Rng rng(419);
  for (int i = 0; i < 20; ++i) {
    RadialSeries rhs(12, kBits);
    for (int k = odm.r + 1; k <= 12; ++k) rhs[k] = Real(rng.sym(), kBits);
    auto gamma = solve_gamma(odm, rhs, 12);
    Real res = (gamma.compose(F1) - gamma - rhs).max_abs();
    expect(o, res.d() < 1e-25, "rhs#" + std::to_string(i) + ": " + num(res.d()));
  }
  return o;
}

// --- 7 --------------------------------------------------------------------
Outcome contraction_sandwich() {
  Outcome o;
  auto F = family_map(Family::A, -1.0, 1, 8);
  auto cb = contraction_bounds(F, 1.0, 3.0);
  expect(o, cb.certified, "window not certified");
  const long ms[] = {1, 2, 5, 10, 20, 50, 100, 200, 500, 1000,
                     2000, 5000, 10000, 20000, 50000, 100000};
  for (int i = 0; i < 16; ++i) {
    double r = cb.r0 * std::pow(0.01 / cb.r0, i / 15.0);
    for (long m : ms) {
      double rm = radial_iterate(F, r, m);
      double lo = model_nu(2 * cb.d, cb.a_plus, r, m);
      double hi = model_nu(2 * cb.d, cb.a_minus, r, m);
      bool ok = lo <= rm && rm <= hi && rm < r;
      expect(o, ok, "r=" + num(r) + " m=" + std::to_string(m) + ": " + num(lo) +
                        " <= " + num(rm) + " <= " + num(hi));
      if (!ok) return o;
    }
  }
  return o;
}

// --- 8 --------------------------------------------------------------------
Outcome neumann_verdicts() {
  Outcome o;
  auto F = family_map(Family::A, -1.0, 1, 16);
  auto norm = solve_homological(F, 16, Gauge::basic());

  auto t0 = std::chrono::steady_clock::now();
  auto good = neumann_run(F, norm.n, cplx(0.1, 0.0), doubling(100, 102400));
  double s0 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  expect(o, good.verdict == "converged", "matched torsion: " + good.verdict);
  expect(o, s0 < 60.0, "converged run took " + num(s0) + " s");

  auto dev = norm.n;
  dev[1] = dev[1] + Real(0.1, kBits);
  auto t1 = std::chrono::steady_clock::now();
  auto bad = neumann_run(F, dev, cplx(0.1, 0.0), doubling(1000, 1024000));
  double s1 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  expect(o, bad.verdict == "diverging", "deviated torsion: " + bad.verdict);
  expect(o, bad.exponent >= -1.0, "exponent " + num(bad.exponent));
  expect(o, s1 < 60.0, "diverging run took " + num(s1) + " s");
  return o;
}

// --- 9 --------------------------------------------------------------------
Outcome slope_reductions() {
  Outcome o;
  auto B = family_map(Family::B, -1.0, 1, 12);
  auto srB = slope_reduction(B, 12);
  expect(o, srB.N == 1 && srB.M == 3, "B slope " + std::to_string(srB.N) + "/" +
                                          std::to_string(srB.M));
  expect(o, !srB.ladder.empty() && srB.ladder[0] == std::array<int, 3>{1, 2, 1},
         "B ladder base is not z^2 zbar");
  auto normB = solve_homological(B, 12, Gauge::basic());
  Real res = reduction_consistency(B, normB, 12);
  expect(o, res.d() < 1e-25, "B consistency " + num(res.d()));

  auto A = family_map(Family::A, -1.0, 1, 12);
  auto srA = slope_reduction(A, 12);
  expect(o, srA.N == 1 && srA.M == 1, "A slope " + std::to_string(srA.N) + "/" +
                                          std::to_string(srA.M));
  Complex lam = A.mult.lambda();
  Real pi = Real::pi(kBits);
  Real pk(1.0, kBits), fact(1.0, kBits);
  for (int k = 1; k <= 4; ++k) {
    Complex want = lam * (pk / fact);
    expect(o, rel_err(srA.F0[k], want) < 1e-25,
           "A F0[" + std::to_string(k) + "] off by " + num(rel_err(srA.F0[k], want)));
    pk = pk * pi;
    fact = fact * Real(static_cast<long>(k), kBits);
  }
  expect(o, !slope_reduction(family_map(Family::C, -1.0, 1, 12), 12).attained,
         "C slope claimed attained");
  return o;
}

// --- 10 -------------------------------------------------------------------
Outcome small_divisor_amplification() {
  Outcome o;
  auto F = make_family(Family::A, Multiplier::literal_str("0.500000000001", kBits),
                       Real(-1.0, kBits), 1, 8, kBits);
  auto norm = solve_homological(F, 8, Gauge::basic());
  Complex lam = F.mult.lambda();
  Real pi = Real::pi(kBits);
  Complex want = Complex(pi, Real(0.0, kBits)) * lam /
                 (two_i() * (one_c() - lam) * (one_c() - lam * lam));
  Complex got = norm.phi.at(2, 0);
  expect(o, got.abs().d() > 1e10, "|phi20| = " + num(got.abs().d()));
  expect(o, rel_err(got, want) < 1e-6, "phi20 off by " + num(rel_err(got, want)));
  return o;
}

// --- 11 -------------------------------------------------------------------
Outcome parametric_fits() {
  Outcome o;
  auto base = family_map(Family::A, -1.0, 1, 8);
  ParametricFamily fam{base.mult, base.f, RadialSeries(8, kBits), base.g,
                       BiSeries(8, kBits, true)};
  fam.f1[1] = Real(-1.0, kBits);  // t=0 is a=-1, t=1 is a=-2
  std::vector<Complex> ts;
  for (int j = 0; j < 12; ++j)
    ts.push_back(exp_i2pi(Real(static_cast<long>(j), kBits) / Real(12L, kBits)) *
                 Real(0.75, kBits));
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q) {
      if (p + q < 1) continue;
      auto fit = parametric_normalization(fam, ts, p, q);
      expect(o, fit.residual.d() < 1e-20,
             "(" + std::to_string(p) + "," + std::to_string(q) + "): residual " +
                 num(fit.residual.d()));
      expect(o, fit.certified,
             "(" + std::to_string(p) + "," + std::to_string(q) + ") not certified");
    }
  return o;
}

// --- 12 -------------------------------------------------------------------
Outcome tongue_boundaries() {
  Outcome o;
  std::vector<double> grid;
  for (int i = 0; i < 41; ++i) grid.push_back(-0.1 + 0.2 * i / 40.0);
  auto scan = tongue_scan_arnold(grid, 0.05, 1, 1e-8);
  bool saw = false;
  for (auto& pl : scan.plateaus)
    if (pl.p == 0 && pl.q == 1) {
      saw = true;
      expect(o, std::fabs(pl.lo + 0.05) < 1e-6, "lo = " + num(pl.lo));
      expect(o, std::fabs(pl.hi - 0.05) < 1e-6, "hi = " + num(pl.hi));
    }
  expect(o, saw, "0/1 tongue not found");

  std::vector<double> unit;
  for (int i = 0; i < 41; ++i) unit.push_back(i / 40.0);
  auto flat = tongue_scan_arnold(unit, 0.0, 6, 1e-8);
  expect(o, !flat.plateaus.empty(), "no plateaus at t=0");
  for (auto& pl : flat.plateaus)
    expect(o, pl.hi - pl.lo <= 1e-8,
           "t=0 plateau " + std::to_string(pl.p) + "/" + std::to_string(pl.q) +
               " width " + num(pl.hi - pl.lo));

  RunConfig cfg;
  cfg.command = "tongues";
  cfg.family = "arnold";
  cfg.t = 0.05;
  cfg.grid = "-0.1:0.1:41";
  cfg.q_max = 1;
  cfg.tol = 1e-8;
  cfg.out = "/tmp/circlenf_acceptance_tongues";
  expect(o, run(cfg) == 0, "tongue artifact emission failed");
  std::string svg = read_file(cfg.out + ".svg");
  std::string csv = read_file(cfg.out + ".csv");
  expect(o, svg.rfind("<svg", 0) == 0 && svg.size() > 500, "svg artifact malformed");
  expect(o, csv.rfind("s,t,rho\n", 0) == 0 && csv.size() > 500, "csv artifact malformed");
  std::remove((cfg.out + ".svg").c_str());
  std::remove((cfg.out + ".csv").c_str());
  std::remove((cfg.out + ".json").c_str());
  return o;
}

// --- 13 -------------------------------------------------------------------
Outcome conjugacy_evaluator() {
  Outcome o;
  auto F = family_map(Family::A, -1.0, 1, 12);
  auto norm = solve_homological(F, 12, Gauge::basic());
  BiSeries ng(12, kBits, true);
  for (int s = 1; 2 * s <= 12 && s <= norm.n.order(); ++s)
    ng.at(s, s) = Complex(norm.n[s], Real(0.0, kBits));
  auto N = make_custom(F.mult, F.f, ng);
  const double r0 = 0.1;
  Rng rng(420);
  for (int band = 0; band < 5; ++band) {
    double rlo = r0 * (0.15 + 0.15 * band);
    for (int i = 0; i < 20; ++i) {
      double r = rlo + 0.14 * r0 * rng.uniform();
      cplx z = std::polar(r, 2 * M_PI * rng.uniform());
      cplx phiz = sternberg_eval(F, N, z, r0);
      cplx lhs = sternberg_eval(F, N, iterate(F, z, 1), r0);
      cplx rhs = iterate(N, phiz, 1);
      double conj_err = std::abs(lhs - rhs);
      double rad_err = std::fabs(std::abs(phiz) - std::abs(z));
      expect(o, conj_err < 1e-10, "conjugacy error " + num(conj_err) + " at r=" + num(r));
      expect(o, rad_err < 1e-12, "radius error " + num(rad_err) + " at r=" + num(r));
      if (!o.pass) return o;
    }
  }
  return o;
}

// --- 14 -------------------------------------------------------------------
Outcome brjuno_vs_fibonacci() {
  Outcome o;
  auto cf = continued_fraction(Multiplier::golden(kBits), 30);
  Real got = brjuno_partial(cf, 30);
  std::vector<double> fib{1.0, 1.0};
  while (fib.size() < 32) fib.push_back(fib.back() + fib[fib.size() - 2]);
  double want = 0;
  for (int n = 0; n < 30; ++n) want += std::log(fib[n + 1]) / fib[n];
  expect(o, std::fabs(got.d() - want) < 1e-9,
         "got " + num(got.d()) + " want " + num(want));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const Criterion criteria[] = {
      {"golden closed forms, family A", golden_family_A},
      {"golden closed forms, family B", golden_family_B},
      {"conjugacy residuals, families and random maps", conjugacy_residuals},
      {"torsion head gauge invariance", torsion_gauge_invariance},
      {"leading normal-form coefficient invariance", first_coefficient_invariance},
      {"polynomial normal form pipeline", polynomial_pipeline},
      {"model contraction sandwich", contraction_sandwich},
      {"neumann ladder verdicts", neumann_verdicts},
      {"slope reduction ladders", slope_reductions},
      {"small-divisor amplification", small_divisor_amplification},
      {"parametric coefficient fits", parametric_fits},
      {"arnold tongue boundaries", tongue_boundaries},
      {"circle-by-circle conjugacy evaluator", conjugacy_evaluator},
      {"brjuno partial sums vs fibonacci", brjuno_vs_fibonacci},
  };

  int failures = 0;
  int id = 0;
  for (const auto& c : criteria) {
    ++id;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const Error& e) {
      o.pass = false;
      o.detail = std::string("error ") + e.module + "/" + e.code + ": " + e.what();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%2d] %s  %-46s (%6.2f s)%s%s\n", id, o.pass ? "PASS" : "FAIL", c.name,
                secs, o.detail.empty() ? "" : "  -- ", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  if (failures) std::printf("%d of 14 criteria failing\n", failures);
  return failures;
}
