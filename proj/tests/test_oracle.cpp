#include <shelfguess/exact_dist.hpp>
#include <shelfguess/oracle.hpp>

#include <doctest.h>

#include <cmath>

using namespace shelfguess;

TEST_CASE("enumeration of small decks") {
  const auto r3 = enumerate_all<Rational>(3, Bias::half());
  CHECK(r3.total.at(2) == frac(3, 4));
  CHECK(r3.total.at(3) == frac(1, 4));
  CHECK(r3.total.mean() == frac(9, 4));
  const auto r4 = enumerate_all<Rational>(4, Bias::half());
  const auto m4 = moments(r4.joint);
  CHECK(*m4.mean_luck == 1);
  CHECK(*m4.mean_certified == 2);
  const auto r1 = enumerate_all<Rational>(1, Bias::parse("3/10"));
  CHECK(r1.sequences == 1);
  CHECK(r1.joint(0, 1) == 1);
  CHECK_THROWS_AS(enumerate_all<Rational>(21, Bias::half()), resource_error);
  CHECK_NOTHROW(enumerate_all<double>(3, Bias::half(), TieBreak::smallest, 3));
}

TEST_CASE("enumeration equals DP") {
  for (const auto& p : {Bias::half(), Bias::parse("3/10"), Bias::parse("3/4")})
    for (int n = 1; n <= 11; ++n) {
      const auto r = enumerate_all<Rational>(n, p);
      CHECK(r.total.same_law(xn_pmf<Rational>(n, p)));
      CHECK(r.joint == joint_pmf<Rational>(n, p));
      CHECK(r.first_card == first_card_law<Rational>(n, p));
    }
}

TEST_CASE("conditional next card") {
  const auto fresh = conditional_next_card<Rational>(3, Bias::half(), {});
  CHECK(fresh.agree);
  CHECK(fresh.enumerated == std::vector<Rational>{frac(1, 2), frac(1, 4), frac(1, 4)});
  const auto after2 = conditional_next_card<Rational>(4, Bias::half(), {2});
  CHECK(after2.agree);
  CHECK(after2.enumerated == std::vector<Rational>{0, 0, frac(1, 2), frac(1, 2)});
  const auto after3 = conditional_next_card<Rational>(4, Bias::half(), {3});
  CHECK(after3.agree);
  CHECK(after3.enumerated[3] == 1);
  CHECK_THROWS_AS(conditional_next_card<Rational>(4, Bias::half(), {3, 1}), std::invalid_argument);
}

TEST_CASE("closed-form next-card law agrees with enumeration on every prefix") {
  for (const auto& p : {Bias::half(), Bias::parse("3/10"), Bias::parse("3/4")})
    for (int n = 1; n <= 8; ++n)
      for_each_deck<Rational>(n, p, [&](const ShuffledDeck& deck, const Rational&) {
        for (int len = 0; len < n; ++len) {
          std::vector<Label> prefix(deck.order().begin(), deck.order().begin() + len);
          CHECK(conditional_next_card<Rational>(n, p, prefix).agree);
        }
      });
}

TEST_CASE("strategy optimality") {
  for (const auto& p : {Bias::parse("3/10"), Bias::half(), Bias::parse("3/4"), Bias::parse("1/5")})
    for (int n = 1; n <= 8; ++n) {
      const auto rep = verify_strategy_optimality<Rational>(n, p);
      INFO(rep.summary());
      CHECK(rep.passed());
      CHECK(rep.expected_score == xn_pmf<Rational>(n, p).mean());
    }
  const auto r4 = verify_strategy_optimality<Rational>(4, Bias::half());
  CHECK(r4.expected_score == 3);
  const auto r2 = verify_strategy_optimality<Rational>(2, Bias::parse("1/5"));
  CHECK(r2.expected_score == frac(9, 5));
  CHECK(r2.root_argmax == std::vector<Label>{2});
}

TEST_CASE("both opening guesses are optimal at the tie point") {
  double p = 0.3;
  for (int it = 0; it < 100; ++it) p -= (p - std::pow(1 - p, 3)) / (1 + 3 * std::pow(1 - p, 2));
  for (auto tie : {TieBreak::smallest, TieBreak::largest}) {
    const auto rep = verify_strategy_optimality<double>(4, Bias(p), tie);
    CHECK(rep.passed());
    CHECK(rep.root_argmax == std::vector<Label>{1, 4});
  }
}
