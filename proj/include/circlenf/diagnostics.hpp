// Small-divisor arithmetic (continued fractions, Brjuno sums), coefficient
// growth profiling, and the slope reduction to a one-variable germ.
#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "circlenf/normalizer.hpp"

namespace circlenf {

// Partial quotients and convergents, kept in arbitrary precision so that
// rule-generated expansions with astronomically large quotients still fit
// (the value only ever enters through log q).
struct ContinuedFraction {
  std::vector<Real> a;  // a_0 .. a_K
  std::vector<Real> p;  // convergent numerators p_0 .. p_K
  std::vector<Real> q;  // convergent denominators, q_0 = 1
  int reliable_depth = 0;  // quotients beyond this index exceeded the precision budget
  bool exhausted = false;
  int bits = 64;
};

// depth = number of quotients past a_0. Analytic forms (golden, cf prefix)
// bypass the Gauss map; literal and quadratic multipliers use it and track
// how much precision each quotient consumes.
ContinuedFraction continued_fraction(const Multiplier& omega, int depth);

ContinuedFraction cf_from_quotients(const std::vector<Real>& a, int bits);

// the divergence-rate showcase a_{n+1} = 10^{q_n}; denominators saturate to
// +inf once they leave the representable range (reliable_depth marks the cut)
ContinuedFraction cf_exponential_quotients(int depth, int bits);

// sum_{n=0}^{depth-1} log(q_{n+1}) / q_n
Real brjuno_partial(const ContinuedFraction& cf, int depth);

// partial sums for the a_{n+1} = 10^{q_n} rule at any depth: once q_n leaves
// the representable range the term identity log(q_{n+1})/q_n = log 10 +
// log(q_n)/q_n + o(1) takes over
std::vector<Real> brjuno_exponential_partials(int depth, int bits);

struct BrjunoReport {
  ContinuedFraction cf;
  std::vector<Real> partials;  // partial sums, index n = depth n+1
  std::string verdict;         // "yes" (quadratic-type multiplier) or "unknown"
  double term_trend = 0;       // regression slope of log(term) vs n
};

BrjunoReport brjuno(const Multiplier& omega, int depth);

// Finite-order divergence phenomenology; explicitly heuristic.
struct GrowthProfile {
  struct Row {
    int degree;
    Real max_coeff;
    double root_test;  // max_coeff^(1/degree)
    Real min_small_divisor;  // 0 when no off-diagonal term was solved there
  };
  std::vector<Row> rows;
  double trend = 0;  // regression slope of log max_coeff vs degree
  bool heuristic = true;
};

GrowthProfile coefficient_growth(const Normalization& norm);

// rho = sup (p-q)/(p+q) over monomials of g, with the one-variable germ
// F0(Z) = lambda^N Z exp(2 pi i N g0(Z)) along the extremal ladder.
struct SlopeReduction {
  int N = 0, M = 1;  // rho = N/M in lowest terms
  bool attained = false;  // stable across the order/2..order window
  bool base_integral = false;  // Z realizable as z^P zbar^Q
  int P = 0, Q = 0;
  std::vector<std::array<int, 3>> ladder;  // integral rungs (k, p_k, q_k)
  ComplexSeries g0{0, 64};  // coefficient k multiplies Z^k
  ComplexSeries F0{0, 64};  // the germ as a one-variable series
  Complex lambdaN{64};
  std::string note;
};

SlopeReduction slope_reduction(const FoliationMap& F, int order);

// residual of g0(Z) + phi0(F0(Z)) - phi0(Z) with phi0 read off the
// normalization's ladder coefficients; requires an attained positive slope
Real reduction_consistency(const FoliationMap& F, const Normalization& norm, int order);

}  // namespace circlenf
