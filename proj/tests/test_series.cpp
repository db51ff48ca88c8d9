#include <shelfguess/oracle.hpp>
#include <shelfguess/series.hpp>

#include <doctest.h>

using namespace shelfguess;

TEST_CASE("first coefficients") {
  const auto total = gf_series_total(3, Bias::half());
  CHECK(total[0] == Poly2::v());
  CHECK(total[1] == Poly2::monomial(frac(1, 2), 1, 0) + Poly2::monomial(frac(1, 2), 2, 0));
  const auto joint = gf_series_joint(2);
  CHECK(joint[0] == Poly2::w());
  CHECK(joint[1] == Poly2::monomial(frac(1, 2), 0, 1) + Poly2::monomial(frac(1, 2), 1, 1));
}

TEST_CASE("coefficients are probability generating polynomials") {
  for (const auto& p : {Bias::half(), Bias::parse("3/4"), Bias::parse("9/10"), Bias::parse("1")}) {
    const auto q = gf_series_total(30, p);
    for (const auto& poly : q) {
      CHECK(poly.evaluate(Rational(1), Rational(1)) == 1);
      CHECK(poly.nonnegative());
    }
  }
  for (const auto& poly : gf_series_joint(25)) {
    CHECK(poly.evaluate(Rational(1), Rational(1)) == 1);
    CHECK(poly.nonnegative());
  }
}

TEST_CASE("total series equals the DP") {
  for (const auto& p : {Bias::half(), Bias::parse("3/5"), Bias::parse("3/4"), Bias::parse("9/10")}) {
    const auto q = gf_series_total(40, p);
    const auto table = xn_pmf_table<Rational>(40, p);
    for (int n = 1; n <= 40; ++n)
      CHECK(q[static_cast<std::size_t>(n - 1)] == generating_polynomial(table[static_cast<std::size_t>(n)]));
  }
}

TEST_CASE("symmetric total form agrees with the biased form at p = 1/2") {
  const auto a = expand(gf::symmetric_total(), 30);
  const auto b = expand(gf::biased_total(frac(1, 2)), 30);
  CHECK(a == b);
}

TEST_CASE("joint series equals the DP, symmetric and biased") {
  for (const auto& p : {Bias::half(), Bias::parse("3/4"), Bias::parse("9/10")}) {
    const auto q = gf_series_joint(24, p);
    const auto table = joint_pmf_table<Rational>(24, p);
    for (int n = 1; n <= 24; ++n)
      CHECK(q[static_cast<std::size_t>(n - 1)] == generating_polynomial(table[static_cast<std::size_t>(n)]));
  }
  CHECK(expand(gf::symmetric_joint(), 20) == expand(gf::biased_joint(frac(1, 2)), 20));
}

TEST_CASE("rejected variants do not reproduce the laws") {
  // Linear z in the last denominator term breaks q_2 already.
  const auto typo = expand(gf::symmetric_total_linear_typo(), 2);
  CHECK_FALSE(typo[1] == generating_polynomial(xn_pmf<Rational>(2, Bias::half())));
  // Swapping the marks makes v count certified guesses.
  const auto swapped = expand(gf::biased_joint_marks_swapped(frac(3, 4)), 3);
  CHECK_FALSE(swapped[2] == generating_polynomial(joint_pmf<Rational>(3, Bias::parse("3/4"))));
  const auto oracle = enumerate_all<Rational>(3, Bias::parse("3/4")).joint;
  CHECK(expand(gf::biased_joint(frac(3, 4)), 3)[2] == generating_polynomial(oracle));
}

TEST_CASE("series needs an exact p of at least 1/2") {
  CHECK_THROWS_AS(gf_series_total(5, Bias::parse("3/10")), std::domain_error);
  CHECK_THROWS_AS(gf_series_total(5, Bias(0.75)), std::domain_error);
}
