// Multipliers (rotation numbers in several input forms) and the
// foliation-preserving maps F(z) = lambda z (1+f(|z|^2)) e^{2 pi i g(z)}.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "circlenf/series.hpp"

namespace circlenf {

class Multiplier {
 public:
  enum class Form { Literal, Golden, Quad, CfPrefix };

  static Multiplier golden(int bits);
  static Multiplier literal(const Real& omega);
  static Multiplier literal_str(const std::string& decimal, int bits);
  // (p + q*sqrt(D)) / r
  static Multiplier quad(long p, long q, long D, long r, int bits);
  // finite prefix completed with an all-ones tail (documented choice)
  static Multiplier cf_prefix(const std::vector<long long>& a, int bits);

  Multiplier with_modulus(const Real& m) const;

  const Real& omega() const { return omega_; }
  const Real& modulus() const { return modulus_; }
  bool irrational() const { return irrational_; }
  bool weak() const;  // modulus == 1
  Form form() const { return form_; }
  const std::vector<long long>& cf_hint() const { return cf_; }
  const std::vector<long>& quad_params() const { return quad_; }  // {p,q,D,r}
  int bits() const { return omega_.prec(); }

  Complex lambda() const;  // modulus * e^{2 pi i omega}

 private:
  Multiplier(Form f, Real omega, int bits);
  Form form_;
  Real omega_;    // canonical value in [0,1)
  Real modulus_;  // in (0,1]
  bool irrational_ = true;
  std::vector<long long> cf_;  // known prefix (Golden/Quad/CfPrefix forms)
  std::vector<long> quad_;     // Quad form only
};

enum class Family { A, B, C, Custom };

struct FoliationMap {
  Multiplier mult;
  RadialSeries f;  // real, zero constant term
  BiSeries g;      // real-valued, zero constant term
  Family tag = Family::Custom;
  Real a;  // family parameter (A/B/C)
  int d = 1;

  int order() const { return g.order(); }
  int bits() const { return g.bits(); }
  Complex lambda() const { return mult.lambda(); }
  bool conservative(const Real& tol) const { return f.valuation(tol) < 0; }
};

FoliationMap make_family(Family tag, const Multiplier& mult, const Real& a, int d,
                         int order, int bits);
FoliationMap make_family(Family tag, const Real& omega, const Real& a, int d,
                         int order, int bits);
FoliationMap make_custom(const Multiplier& mult, const RadialSeries& f, const BiSeries& g);

// truncated expansions of F and its conjugate series
std::pair<BiSeries, BiSeries> as_series(const FoliationMap& F);

// closed-form evaluation for tagged families, series evaluation for custom
// maps (validity radius 0.1; *outside_validity set when exceeded).
Complex eval_map(const FoliationMap& F, const Complex& z, bool* outside_validity = nullptr);

Real radial_nu(const FoliationMap& F, const Real& r);

struct PolarComponents {
  double nu;
  std::function<double(double)> lift;  // theta -> theta + omega + g_r(theta)
};
PolarComponents polar_components(const FoliationMap& F, double r);

// double-precision angular term g(r, theta) (closed form for families)
double polar_angular(const FoliationMap& F, double r, double theta);

}  // namespace circlenf
