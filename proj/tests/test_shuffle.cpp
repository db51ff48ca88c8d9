#include <shelfguess/oracle.hpp>
#include <shelfguess/shuffle.hpp>

#include <doctest.h>

#include <random>
#include <set>

using namespace shelfguess;

namespace {

std::vector<Label> deck(int n, std::initializer_list<bool> flips) {
  return deck_from_placements(n, PlacementSequence(flips)).order();
}

const std::vector<Rational> kGrid = {frac(1, 2), frac(3, 10), frac(3, 4), frac(9, 10), frac(1, 7)};

}  // namespace

TEST_CASE("deck_from_placements by hand") {
  CHECK(deck(1, {}) == std::vector<Label>{1});
  CHECK(deck(2, {true}) == std::vector<Label>{1, 2});
  CHECK(deck(2, {false}) == std::vector<Label>{2, 1});
  CHECK(deck(3, {true, true}) == std::vector<Label>{1, 2, 3});
  CHECK(deck(3, {true, false}) == std::vector<Label>{2, 3, 1});
  CHECK(deck(4, {true, false, true}) == std::vector<Label>{1, 3, 4, 2});
  CHECK_THROWS_AS(deck_from_placements(3, PlacementSequence{true}), std::invalid_argument);
  CHECK_THROWS_AS(deck_from_placements(0, PlacementSequence{}), std::invalid_argument);
}

TEST_CASE("all-top placements give the identity") {
  for (int n = 1; n <= 30; ++n)
    CHECK(deck_from_placements(n, PlacementSequence(static_cast<std::size_t>(n - 1), true)).is_identity());
}

TEST_CASE("placements are injective and decks are shelf shaped") {
  for (int n = 1; n <= 12; ++n) {
    const auto r = enumerate_all<Rational>(n, Bias::half());
    CHECK(r.sequences == (std::uint64_t{1} << (n - 1)));
    CHECK(r.injective);
    CHECK(r.all_shelf_shaped);
  }
}

TEST_CASE("placements_of inverts deck_from_placements") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    PlacementSequence flips(static_cast<std::size_t>(n - 1));
    for (auto&& f : flips) f = (rng() & 1U) != 0;
    CHECK(placements_of(deck_from_placements(n, flips)) == flips);
  }
}

TEST_CASE("shelf_shuffle is seed-deterministic") {
  std::mt19937_64 a(123), b(123);
  for (int k = 0; k < 50; ++k) CHECK(shelf_shuffle(25, Bias::half(), a) == shelf_shuffle(25, Bias::half(), b));
  std::mt19937_64 c(1);
  CHECK(shelf_shuffle(1, Bias::parse("3/10"), c).order() == std::vector<Label>{1});
  std::mt19937_64 d(1);
  CHECK(shelf_shuffle(12, Bias::parse("1"), d).is_identity());
}

TEST_CASE("position matrix small values") {
  const auto m = position_matrix<Rational>(3, Bias::half());
  CHECK(m(2, 1) == frac(1, 4));
  CHECK(m(2, 2) == frac(1, 2));
  CHECK(m(2, 3) == frac(1, 4));
  // Two-card deck with bias p: card 1 on top with probability p.
  const auto a = position_matrix<Rational>(2, Bias::parse("3/10"));
  CHECK(a(1, 1) == frac(3, 10));
  CHECK(a(1, 2) == frac(7, 10));
}

TEST_CASE("symmetric position matrix matches the binomial-sum formula") {
  for (int n = 1; n <= 20; ++n) {
    const auto m = position_matrix<Rational>(n, Bias::half());
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        Rational expected(binomial(i - 1, j - 1) + (n - j <= i - 1 ? binomial(i - 1, n - j) : Integer(0)));
        expected /= pow_int(Rational(2), static_cast<std::uint64_t>(i));
        CHECK(m(i, j) == expected);
      }
  }
}

TEST_CASE("position matrix is doubly stochastic with the derived zero set") {
  for (const auto& p : kGrid) {
    for (int n = 1; n <= 64; n += (n < 12 ? 1 : 13)) {
      const auto m = position_matrix<Rational>(n, Bias(p));
      for (int k = 1; k <= n; ++k) {
        CHECK(m.row_sum(k) == 1);
        CHECK(m.column_sum(k) == 1);
      }
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) CHECK((m(i, j) == 0) == (i + 1 <= j && j <= n - i));
    }
  }
}

TEST_CASE("mirror symmetry holds only at p = 1/2") {
  for (int n = 2; n <= 15; ++n) {
    const auto m = position_matrix<Rational>(n, Bias::half());
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) CHECK(m(i, n - j + 1) == m(i, j));
    const auto b = position_matrix<Rational>(n, Bias::parse("3/10"));
    bool broken = false;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) broken = broken || b(i, n - j + 1) != b(i, j);
    CHECK(broken);
  }
}

TEST_CASE("position matrix equals enumeration") {
  for (const auto& p : {frac(1, 2), frac(3, 10), frac(3, 4)})
    for (int n = 1; n <= 12; ++n) {
      const auto r = enumerate_all<Rational>(n, Bias(p));
      CHECK(r.positions == position_matrix<Rational>(n, Bias(p)));
      CHECK(r.weight_sum == 1);
    }
}

TEST_CASE("first card law") {
  CHECK(first_card_law<Rational>(3, Bias::half()) == std::vector<Rational>{frac(1, 2), frac(1, 4), frac(1, 4)});
  CHECK(first_card_law<Rational>(4, Bias::parse("3/10")) ==
        std::vector<Rational>{frac(3, 10), frac(21, 100), frac(147, 1000), frac(343, 1000)});
  CHECK(first_card_law<Rational>(1, Bias::parse("3/10")) == std::vector<Rational>{Rational(1)});
  for (int n = 1; n <= 20; ++n) {
    const auto law = first_card_law<Rational>(n, Bias::half());
    for (int i = 1; i <= n; ++i)
      CHECK(law[static_cast<std::size_t>(i - 1)] == Rational(i == n ? 2 : 1) / pow_int(Rational(2), i));
    const auto m = position_matrix<Rational>(n, Bias::parse("3/4"));
    const auto col = first_card_law<Rational>(n, Bias::parse("3/4"));
    for (int i = 1; i <= n; ++i) CHECK(col[static_cast<std::size_t>(i - 1)] == m(i, 1));
  }
}

TEST_CASE("first card frequencies follow the law") {
  std::mt19937_64 rng(99);
  const Bias p = Bias::parse("3/10");
  std::vector<double> freq(4, 0);
  const int reps = 200000;
  for (int k = 0; k < reps; ++k) freq[static_cast<std::size_t>(shelf_shuffle(4, p, rng).at(1) - 1)] += 1.0 / reps;
  const auto law = first_card_law<double>(4, p);
  for (std::size_t i = 0; i < 4; ++i) CHECK(freq[i] == doctest::Approx(law[i]).epsilon(0.02));
}

TEST_CASE("float backend agrees with exact") {
  const auto e = position_matrix<Rational>(30, Bias::parse("3/10"));
  const auto f = position_matrix<double>(30, Bias::parse("3/10"));
  for (int i = 1; i <= 30; ++i)
    for (int j = 1; j <= 30; ++j) CHECK(f(i, j) == doctest::Approx(e(i, j).get_d()).epsilon(1e-12));
}
