#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "circlenf/diagnostics.hpp"
#include "testutil.hpp"

using namespace circlenf;

namespace {
const int kBits = 256;

FoliationMap family(Family fam, double a, int order = 12) {
  return make_family(fam, Multiplier::golden(kBits), Real(a, kBits), 1, order, kBits);
}

double rdiff(const Real& x, const Real& y) { return abs(x - y).d(); }

// Fibonacci ladder q_0 = q_1 = 1, q_{n+1} = q_n + q_{n-1}
std::vector<double> fib_denominators(int count) {
  std::vector<double> q{1.0, 1.0};
  while (static_cast<int>(q.size()) < count) q.push_back(q.back() + q[q.size() - 2]);
  return q;
}
}  // namespace

TEST_CASE("golden continued fraction is the Fibonacci ladder") {
  auto cf = continued_fraction(Multiplier::golden(kBits), 30);
  REQUIRE(cf.a.size() == 31);
  CHECK(cf.a[0].d() == 0.0);
  for (int n = 1; n <= 30; ++n) CHECK(cf.a[n].d() == 1.0);
  auto fib = fib_denominators(31);
  for (int n = 0; n <= 30; ++n) CHECK(cf.q[n].d() == fib[n]);
  CHECK(cf.reliable_depth == 30);
  CHECK_FALSE(cf.exhausted);

  SUBCASE("convergents approximate to within 1/q_{n+1}") {
    Real w = Multiplier::golden(kBits).omega();
    for (int n = 0; n + 1 <= 30; ++n)
      CHECK(abs(cf.q[n] * w - cf.p[n]) < Real(1L, kBits) / cf.q[n + 1]);
  }

  SUBCASE("partial sums match a direct Fibonacci evaluation") {
    Real b30 = brjuno_partial(cf, 30);
    double direct = 0;
    for (int n = 0; n < 30; ++n) direct += std::log(fib[n + 1]) / fib[n];
    CHECK(b30.d() == doctest::Approx(direct).epsilon(1e-9));
    CHECK(rdiff(b30, Real("3.2860998066501013849777384193", kBits)) < 1e-25);
  }
}

TEST_CASE("gauss-map expansions for literal and quadratic multipliers") {
  SUBCASE("e - 2 reproduces its textbook quotients") {
    Real em2 = exp(Real(1.0, kBits)) - Real(2L, kBits);
    auto cf = continued_fraction(Multiplier::literal(em2), 8);
    long want[] = {0, 1, 2, 1, 1, 4, 1, 1, 6};
    REQUIRE(cf.a.size() == 9);
    for (int i = 0; i <= 8; ++i) CHECK(cf.a[i].d() == static_cast<double>(want[i]));
    CHECK(cf.reliable_depth == 8);
  }
  SUBCASE("the quadratic golden form agrees with the analytic tail") {
    auto cf = continued_fraction(Multiplier::quad(1, 1, 5, 2, kBits), 10);
    for (int n = 1; n <= 10; ++n) CHECK(cf.a[n].d() == 1.0);
    CHECK(cf.reliable_depth == 10);
  }
  SUBCASE("rational multipliers are rejected") {
    CHECK_THROWS_AS(continued_fraction(Multiplier::literal_str("0.25", kBits), 5), Error);
  }
  SUBCASE("quotient lists are validated") {
    CHECK_THROWS_AS(cf_from_quotients({}, kBits), Error);
    CHECK_THROWS_AS(cf_from_quotients({Real(0L, kBits), Real(0.5, kBits)}, kBits), Error);
    auto cf = cf_from_quotients({Real(0L, kBits), Real(2L, kBits), Real(3L, kBits)}, kBits);
    CHECK(cf.p[2].d() == 3.0);  // [0; 2, 3] = 3/7
    CHECK(cf.q[2].d() == 7.0);
  }
}

TEST_CASE("exponential-quotient rule saturates but its partials keep going") {
  auto cf = cf_exponential_quotients(5, kBits);
  CHECK(cf.q[1].d() == 10.0);
  CHECK(cf.q[2].d() == doctest::Approx(1e11).epsilon(1e-9));
  CHECK(cf.reliable_depth == 3);
  CHECK(cf.exhausted);
  // generic sums work while denominators stay representable ...
  auto partials = brjuno_exponential_partials(5, kBits);
  REQUIRE(partials.size() == 5);
  for (int depth = 1; depth <= 3; ++depth)
    CHECK(rdiff(partials[depth - 1], brjuno_partial(cf, depth)) < 1e-60);
  // ... and past the cut only the rule-specific form does
  CHECK_THROWS_AS(brjuno_partial(cf, 5), Error);
  CHECK(rdiff(partials[4], Real("11.74318397452391734871866360053", kBits)) < 1e-25);
}

TEST_CASE("brjuno verdicts") {
  auto golden = brjuno(Multiplier::golden(kBits), 12);
  CHECK(golden.verdict == "yes");
  CHECK(golden.term_trend < 0);
  CHECK(golden.partials.size() == 12);
  CHECK(brjuno(Multiplier::quad(1, 1, 5, 2, kBits), 8).verdict == "yes");
  Real em2 = exp(Real(1.0, kBits)) - Real(2L, kBits);
  CHECK(brjuno(Multiplier::literal(em2), 8).verdict == "unknown");
}

TEST_CASE("coefficient growth profiles") {
  SUBCASE("a pure rotation has a flat profile") {
    auto F = make_custom(Multiplier::golden(kBits), RadialSeries(8, kBits),
                         BiSeries(8, kBits, true));
    auto g = coefficient_growth(solve_homological(F, 8, Gauge::basic()));
    CHECK(g.trend == 0.0);
    for (auto& row : g.rows) {
      CHECK(row.max_coeff.is_zero());
      CHECK(row.root_test == 0.0);
    }
  }
  SUBCASE("golden multiplier keeps the root test bounded") {
    auto norm = solve_homological(family(Family::A, -1.0, 40), 40, Gauge::basic());
    auto g = coefficient_growth(norm);
    REQUIRE(static_cast<int>(g.rows.size()) == 40);
    CHECK(rdiff(g.rows[0].min_small_divisor,
                Real("1.864064847626455243068063337382", kBits)) < 1e-25);
    for (auto& row : g.rows) CHECK(row.root_test < 20.0);
    CHECK(g.trend > 0.0);
    CHECK(g.trend < 3.0);
    CHECK(g.heuristic);
  }
  SUBCASE("a near-resonance leaves a visible spike") {
    auto F = make_family(Family::A, Multiplier::literal_str("0.500000000001", kBits),
                         Real(-1.0, kBits), 1, 8, kBits);
    auto norm = solve_homological(F, 8, Gauge::basic());
    auto g = coefficient_growth(norm);
    CHECK(g.rows[1].degree == 2);
    CHECK(g.rows[1].min_small_divisor.d() ==
          doctest::Approx(1.2566370614e-11).epsilon(1e-3));
    CHECK(g.rows[1].max_coeff.d() > 1e10);
    // the spike is exactly the reciprocal divisor acting on an O(1) numerator
    double product = g.rows[1].max_coeff.d() * g.rows[1].min_small_divisor.d();
    CHECK(product > 0.1);
    CHECK(product < 10.0);
  }
}

TEST_CASE("slope reduction ladders") {
  Complex lam = Multiplier::golden(kBits).lambda();
  Real pi = Real::pi(kBits);

  SUBCASE("vertical family: slope 1, exponential germ") {
    auto sr = slope_reduction(family(Family::A, -1.0), 12);
    CHECK(sr.N == 1);
    CHECK(sr.M == 1);
    CHECK(sr.attained);
    CHECK(sr.base_integral);
    CHECK(sr.P == 1);
    CHECK(sr.Q == 0);
    CHECK((sr.lambdaN - lam).abs().d() < 1e-70);
    // g0 = Z / 2i, so F0 = lambda Z e^{pi Z}
    CHECK((sr.g0[1] - Complex(Real(0.0, kBits), Real(-0.5, kBits))).abs().d() < 1e-70);
    CHECK(sr.g0[2].abs().d() < 1e-70);
    Real fact(1L, kBits);
    Real pk(1L, kBits);
    for (int k = 1; k <= 4; ++k) {
      Complex want = lam * (pk / fact);
      CHECK((sr.F0[k] - want).abs().d() < 1e-60);
      pk = pk * pi;
      fact = fact * Real(static_cast<long>(k), kBits);
    }
  }

  SUBCASE("torsion family: slope 1/3 with an integral base") {
    auto sr = slope_reduction(family(Family::B, -1.0), 12);
    CHECK(sr.N == 1);
    CHECK(sr.M == 3);
    CHECK(sr.attained);
    CHECK(sr.P == 2);
    CHECK(sr.Q == 1);
    REQUIRE(!sr.ladder.empty());
    CHECK(sr.ladder[0] == std::array<int, 3>{1, 2, 1});
    CHECK((sr.g0[1] - Complex(Real(0.0, kBits), Real(-0.5, kBits))).abs().d() < 1e-70);
    CHECK((sr.F0[2] - lam * pi).abs().d() < 1e-60);
  }

  SUBCASE("entire angular part: the slope never stabilizes") {
    auto sr = slope_reduction(family(Family::C, -1.0), 12);
    CHECK(sr.N == 5);  // (T-2)/T at T = 12
    CHECK(sr.M == 6);
    CHECK_FALSE(sr.attained);
    CHECK_FALSE(sr.note.empty());
    CHECK_FALSE(sr.base_integral);
    REQUIRE(sr.ladder.size() == 1);  // only the k = 2 rung is integral
    CHECK(sr.ladder[0] == std::array<int, 3>{2, 11, 1});
    double tenfact = 3628800.0;
    CHECK(sr.g0[2].abs().d() == doctest::Approx(0.5 / tenfact).epsilon(1e-9));
  }

  SUBCASE("bookkeeping on a handmade angular part") {
    Complex c1(0.3, 0.1, kBits), c2(-0.05, 0.2, kBits);
    BiSeries g(6, kBits, true);
    g.at(1, 1) = Complex(0.2, 0.0, kBits);
    g.at(2, 1) = c1;
    g.at(1, 2) = c1.conj();
    g.at(4, 2) = c2;
    g.at(2, 4) = c2.conj();
    RadialSeries f(6, kBits);
    f[1] = Real(-0.1, kBits);
    auto sr = slope_reduction(make_custom(Multiplier::golden(kBits), f, g), 6);
    CHECK(sr.N == 1);
    CHECK(sr.M == 3);
    CHECK(sr.attained);
    REQUIRE(sr.ladder.size() == 2);
    CHECK(sr.ladder[1] == std::array<int, 3>{2, 4, 2});
    CHECK((sr.g0[1] - c1).abs().d() < 1e-70);
    CHECK((sr.g0[2] - c2).abs().d() < 1e-70);
    // F0[2] = lambda * 2 pi i g0[1]
    Complex want = (lam * c1) * (pi + pi);
    want = Complex(-want.im(), want.re());
    CHECK((sr.F0[2] - want).abs().d() < 1e-60);
  }

  SUBCASE("guards") {
    auto F = make_custom(Multiplier::golden(kBits), RadialSeries(6, kBits),
                         BiSeries(6, kBits, true));
    CHECK_THROWS_AS(slope_reduction(F, 6), Error);
  }
}

TEST_CASE("one-variable reduction is consistent with the normalization") {
  auto A = family(Family::A, -1.0);
  auto normA = solve_homological(A, 12, Gauge::basic());
  CHECK(reduction_consistency(A, normA, 12).d() < 1e-60);

  auto B = family(Family::B, -1.0);
  auto basic = solve_homological(B, 12, Gauge::basic());
  auto kt = solve_homological(B, 12, Gauge::kill_torsion());
  Real rb = reduction_consistency(B, basic, 12);
  Real rk = reduction_consistency(B, kt, 12);
  CHECK(rb.d() < 1e-70);
  // the ladder sits off the diagonal, so the gauge cannot move it
  CHECK(rdiff(rb, rk) < 1e-70);

  SUBCASE("guards") {
    auto C = family(Family::C, -1.0);
    auto normC = solve_homological(C, 12, Gauge::basic());
    CHECK_THROWS_AS(reduction_consistency(C, normC, 12), Error);
    // diagonal angular part: slope 0
    BiSeries g(6, kBits, true);
    g.at(1, 1) = Complex(0.3, 0.0, kBits);
    RadialSeries f(6, kBits);
    f[1] = Real(-0.1, kBits);
    auto F0 = make_custom(Multiplier::golden(kBits), f, g);
    auto norm0 = solve_homological(F0, 6, Gauge::basic());
    CHECK_THROWS_AS(reduction_consistency(F0, norm0, 6), Error);
  }
}
