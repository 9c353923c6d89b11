// Non-uniqueness calculus: gauge maps acting on normal forms, conservative
// monomialization, the one-dimensional conjugacy machinery, the polynomial
// normal form, and the convergence-class heuristic.
#pragma once

#include "circlenf/normalizer.hpp"

namespace circlenf {

// H(z) = z (1 + a(|z|^2)) e^{2 pi i b(|z|^2)}
struct GaugeMap {
  RadialSeries a, b;
};
GaugeMap make_gauge_map(const RadialSeries& a, const RadialSeries& b);

// N(z) = lambda z (1 + alpha(|z|^2)) e^{2 pi i beta(|z|^2)}
struct NormalFormPair {
  RadialSeries alpha, beta;
  Multiplier mult;
};

NormalFormPair apply_gauge(const RadialSeries& nstar, const RadialSeries& f,
                           const GaugeMap& H, const Multiplier& mult, int order);

struct Monomialization {
  RadialSeries astar;
  int p;    // first non-vanishing torsion index
  Real np;  // its value: target beta = np * u^p
};
Monomialization monomialize_conservative(const RadialSeries& nstar, int order);

struct InvariantReport {
  bool indeterminate = false;
  int k1 = -1, k2 = -1;
  Real v1, v2;
  bool match = false;
};
InvariantReport first_nonvanishing_invariant(const NormalFormPair& n1,
                                             const NormalFormPair& n2);

// phi(t) = t + ..., with  phi ∘ F1 = F2 ∘ phi,  F1 = t - b t^{r+1} + c t^{2r+1}
// (+ optional completion above t^{2r+1}); gauge: phi_{r+1} = 0.
struct OneDimConjugacy {
  RadialSeries phi;
  Real b, c;
  int r = 0;
};
OneDimConjugacy one_dim_conjugacy(const RadialSeries& F2, int order,
                                  const RadialSeries* completion = nullptr);

struct OneDimMap {
  RadialSeries F1;
  Real b;
  int r = 0;
};
OneDimMap one_dim_from_series(const RadialSeries& F1);

// gamma with  gamma ∘ F1 - gamma = rhs,  rhs of valuation >= r+1
RadialSeries solve_gamma(const OneDimMap& F1, const RadialSeries& rhs, int order);

struct PolyNormalForm {
  ComplexSeries P;  // polynomial of degree <= 2r in u: N1(z) = lambda z P(|z|^2)
  RadialSeries Q;   // split variant: N(z) = lambda z Q(|z|^2) e^{2 pi i G(|z|^2)}
  RadialSeries G;   // r-jet of beta ∘ phi
  RadialSeries phi1d, a_H, gamma;  // conjugacy pieces (combined target)
  Real b, c;
  int r = 0;
  Real residual;        // bivariate conjugacy check against lambda z P(u)
  Real residual_split;  // same check against the split target
};
PolyNormalForm polynomial_normal_form(const NormalFormPair& n2, int order);

struct GrowthEstimate {
  bool rc = true;     // finite-order heuristic verdict
  double slope = 0;   // super-geometric growth exponent estimate
  double radius = 0;  // crude radius estimate when rc
  int used = 0;       // coefficients entering the estimate
};
struct RcReport {
  GrowthEstimate gauge;  // (a, b) jointly
  GrowthEstimate phi;
};
RcReport rc_classify(const GaugeMap& H, const BiSeries& phi);

// structural check: |K(z)|^2 depends on |z|^2 only (off-diagonal terms vanish)
bool preserves_foliation(const BiSeries& Kz, const Real& tol);

}  // namespace circlenf
