// Degree-by-degree solution of  g + phi∘F − phi = n  (the homological
// equation), gauge choices for the free diagonal, and certification.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "circlenf/maps.hpp"

namespace circlenf {

enum class GaugeKind { Basic, KillTorsionAboveD, CustomDiagonal, StrongContraction };

struct Gauge {
  GaugeKind kind = GaugeKind::Basic;
  std::vector<double> diagonal;  // CustomDiagonal: phi_{ss} for s = 1, 2, ...

  static Gauge basic() { return {}; }
  static Gauge kill_torsion() { return {GaugeKind::KillTorsionAboveD, {}}; }
  static Gauge custom_diagonal(std::vector<double> v) {
    return {GaugeKind::CustomDiagonal, std::move(v)};
  }
  static Gauge strong() { return {GaugeKind::StrongContraction, {}}; }
};

const char* gauge_name(GaugeKind k);
GaugeKind gauge_from_name(const std::string& s);

struct Normalization {
  BiSeries phi;    // real-valued angular corrector
  RadialSeries n;  // torsion
  Gauge gauge;
  Real residual;  // from the independent composition check
  // per total degree: minimum |lambda^{p-q} - 1| used at that degree
  std::vector<std::pair<int, Real>> small_divisor_log;
  std::vector<int> near_resonant;  // degrees under the warning threshold
  Real reality_residue;            // asymmetry removed when realifying phi, n
};

Normalization solve_homological(const FoliationMap& F, int order, const Gauge& gauge);

// independent check: rebuilds Phi∘F − N∘Phi by full composition
Real verify_conjugacy(const FoliationMap& F, const Normalization& norm, int order);

struct InitialForm {
  bool found = false;
  int k = 0;                    // lowest total degree of g - n
  std::vector<Complex> fourier;  // frequencies 1..k of the degree-k slice
  Real mean;                     // frequency-0 magnitude (should vanish)
};
InitialForm tilde_g_initial_form(const FoliationMap& F, const Normalization& norm);

// coefficients affine in t:  f_t = f0 + t f1,  g_t = g0 + t g1
struct ParametricFamily {
  Multiplier mult;
  RadialSeries f0, f1;
  BiSeries g0, g1;
};

struct ParametricFit {
  int p = 0, q = 0;
  std::vector<Complex> coeff;  // polynomial in t, degree p+q, lowest first
  Real residual;               // max |fit(t_i) - value_i| over the samples
  bool certified = true;       // false when a near-resonant degree interferes
};

ParametricFit parametric_normalization(const ParametricFamily& fam,
                                       const std::vector<Complex>& t_samples, int p, int q);

}  // namespace circlenf
