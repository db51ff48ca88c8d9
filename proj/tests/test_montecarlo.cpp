#include <shelfguess/montecarlo.hpp>

#include <doctest.h>

#include <cmath>

using namespace shelfguess;

TEST_CASE("substream seeds") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(substream_seed(42, 0) != substream_seed(42, 1));
  CHECK(substream_seed(42, 7) == substream_seed(42, 7));
}

TEST_CASE("simulation is deterministic and independent of worker count") {
  SimConfig cfg;
  cfg.n = 12;
  cfg.replications = 10000;
  cfg.seed = 7;
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  CHECK(a.counts == b.counts);
  cfg.workers = 3;
  const auto c = simulate(cfg);
  CHECK(a.counts == c.counts);
  cfg.seed = 8;
  CHECK_FALSE(simulate(cfg).counts == a.counts);
}

TEST_CASE("small decks") {
  SimConfig cfg;
  cfg.n = 1;
  cfg.replications = 100;
  const auto one = simulate(cfg);
  CHECK(one.counts.x_hist[1] == 100);
  CHECK(one.counts.sum_c == 100);
  cfg.n = 2;
  cfg.replications = 5000;
  const auto two = simulate(cfg);
  CHECK(two.counts.x_hist[0] == 0);
  CHECK(two.counts.x_hist[1] + two.counts.x_hist[2] == 5000);
  CHECK(std::abs(two.mean_x - 1.5) < 0.05);
  cfg.replications = 0;
  CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
}

TEST_CASE("empirical law is close to the exact law") {
  SimConfig cfg;
  cfg.n = 16;
  cfg.p = Bias::parse("3/10");
  cfg.replications = 40000;
  const auto exact = xn_pmf<double>(cfg.n, cfg.p);
  const auto s = simulate(cfg, &exact.probs);
  REQUIRE(s.tv_to_exact);
  CHECK(*s.tv_to_exact < 0.02);
  CHECK(std::abs(s.mean_x - exact.mean()) < 4 * s.stderr_x());
}

TEST_CASE("distance helpers") {
  CHECK(total_variation({0.5, 0.5}, {1.0}) == doctest::Approx(0.5));
  CHECK(total_variation({0.2, 0.8}, {0.2, 0.8}) == 0.0);
  CHECK(normal_cdf(0) == doctest::Approx(0.5));
  // A point mass at 0 against Phi: the jump at 0 takes the CDF from 0 to 1.
  CHECK(ks_to_normal({1.0}, 0.0, 1.0) == doctest::Approx(0.5));
  double tail = 0;
  const auto po = poisson_pmf(2.0, 40, &tail);
  CHECK(po[0] == doctest::Approx(std::exp(-2.0)));
  CHECK(po[3] == doctest::Approx(8.0 / 6.0 * std::exp(-2.0)));
  CHECK(tail < 1e-12);
  CHECK(tv_to_poisson({1.0}, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
}

TEST_CASE("phase sweep rows") {
  const auto rows = phase_transition_sweep({1.0}, {0.5, 1.0, 2.0}, {100, 1000});
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.has_law);
    CHECK(r.identity_prob == doctest::Approx(std::pow(r.p, r.n - 1)));
  }
  CHECK(rows[0].limit == 0.0);
  CHECK(rows[2].limit == doctest::Approx(std::exp(-1.0)));
  CHECK(rows[4].limit == 1.0);
  // alpha = 1: the deficit is close to Poisson(lambda).
  CHECK(rows[3].tv_poisson < 0.01);
  CHECK(std::abs(rows[3].mean_deficit - 1.0) < 0.01);
  CHECK(std::abs(rows[3].identity_prob - std::exp(-1.0)) < 1e-3);
}

TEST_CASE("means at n = 50 over 10^6 games sit within 4 standard errors") {
  SimConfig cfg;
  cfg.n = 50;
  cfg.replications = 1000000;
  const auto s = simulate(cfg);
  CHECK(std::abs(s.mean_x - 37.5) <= 4 * s.stderr_x());
  CHECK(std::abs(s.mean_l - 12.5) <= 4 * s.stderr_l());
  CHECK(std::abs(s.mean_c - 25.0) <= 4 * s.stderr_c());
}
