// Orbit machinery in double precision: iteration, contraction sandwich
// bounds, Neumann semi-conjugacy ladders, Sternberg-style conjugacy
// evaluation, rotation numbers and tongue scans.
#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "circlenf/normalizer.hpp"

namespace circlenf {

using cplx = std::complex<double>;

// nu_{p,atilde}^{(m)}(r) = r (1 + m atilde r^p)^{-1/p}
double model_nu(int p, double atilde, double r, long m = 1);

cplx iterate(const FoliationMap& F, cplx z, long m);
double radial_iterate(const FoliationMap& F, double r, long m);

struct ContractionBounds {
  int d = 1;
  double a_minus = 0, a_plus = 0;
  double r0 = 0;
  double C = 0, D = 0, K = 1;
  bool certified = false;
  double worst_gap = 0;  // smallest sandwich margin seen on the grid
};
ContractionBounds contraction_bounds(const FoliationMap& F, double a_minus, double a_plus);

struct NeumannRun {
  struct Step {
    long M;
    cplx S;
  };
  std::vector<Step> ladder;
  std::string verdict;  // converged | diverging | inconclusive
  double exponent = 0;  // fitted term-decay exponent
};
NeumannRun neumann_run(const FoliationMap& F, const RadialSeries& n, cplx z,
                       const std::vector<long>& M_ladder);

// Phi with Phi∘F = N∘Phi on the disk of radius r0, built annulus by annulus
// from the identity on C0; preserves each circle.
cplx sternberg_eval(const FoliationMap& F, const FoliationMap& N, cplx z, double r0 = 0.1);

struct RotationResult {
  double rho = 0;  // in [0,1)
  double error_est = 0;
  bool converged = false;
};
RotationResult rotation_number(const std::function<double(double)>& lift, double theta0,
                               long iterations, double tol);

struct Plateau {
  int p = 0, q = 1;
  double lo = 0, hi = 0;
};
struct TongueScan {
  bool arnold = true;
  double t = 0;  // Arnold slice parameter
  std::vector<double> grid;  // s values (Arnold) or r values (family slice)
  std::vector<double> rho;
  std::vector<Plateau> plateaus;
};
TongueScan tongue_scan_arnold(const std::vector<double>& s_grid, double t, int q_max,
                              double tol);
TongueScan tongue_scan_family(const FoliationMap& F, const std::vector<double>& r_grid,
                              int q_max, double tol);

}  // namespace circlenf
