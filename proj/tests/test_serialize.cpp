#include <shelfguess/serialize.hpp>

#include <doctest.h>

using namespace shelfguess;

TEST_CASE("compact pmf form") {
  const auto law = xn_pmf<Rational>(4, Bias::half());
  CHECK(pmf_compact_json(law).dump() == R"({"2":"1/8","3":"3/4","4":"1/8"})");
  const auto back = pmf_from_json<Rational>(pmf_compact_json(law), 4, Bias::half());
  CHECK(back.same_law(law));
  // Keys stay in numeric order past 9.
  const auto big = pmf_compact_json(xn_pmf<Rational>(12, Bias::half()));
  CHECK(big.begin().key() == "6");
}

TEST_CASE("full pmf and joint round trip") {
  for (const auto& p : {Bias::half(), Bias::parse("3/10"), Bias::parse("0.9")}) {
    const auto law = xn_pmf<Rational>(9, p);
    const auto j = pmf_json(law);
    CHECK(j["backend"] == "exact");
    CHECK(pmf_from_json<Rational>(Json::parse(j.dump())).same_law(law));
    const auto joint = joint_pmf<Rational>(9, p);
    CHECK(joint_from_json<Rational>(Json::parse(joint_json(joint).dump())) == joint);
  }
  const auto fl = xn_pmf<double>(30, Bias(0.7));
  const auto back = pmf_from_json<double>(Json::parse(pmf_json(fl).dump()));
  for (std::size_t k = 0; k < fl.probs.size(); ++k) CHECK(back.probs[k] == fl.probs[k]);
  CHECK(pmf_json(fl)["backend"] == "float");
}

TEST_CASE("position matrix round trip") {
  const auto m = position_matrix<Rational>(6, Bias::parse("2/3"));
  const auto j = position_matrix_json(m, Bias::parse("2/3"));
  CHECK(j["rows"].size() == 6);
  CHECK(position_matrix_from_json<Rational>(Json::parse(j.dump())) == m);
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS(pmf_from_json<Rational>(Json::parse(R"({"7":"1/2"})"), 4, Bias::half()), std::out_of_range);
  CHECK_THROWS(pmf_from_json<Rational>(Json::parse(R"({"2":"x"})"), 4, Bias::half()));
  CHECK_THROWS(pmf_from_json<Rational>(Json::parse(R"({"2":0.5})"), 4, Bias::half()));
  CHECK_THROWS(position_matrix_from_json<Rational>(Json::parse(R"({"n":2,"rows":[["1"]]})")));
}

TEST_CASE("game and simulation reports") {
  const auto rec = play_game(ShuffledDeck({2, 3, 1}), Bias::half());
  const auto j = game_record_json(rec, Bias::half());
  CHECK(j["totals"]["correct"] == 2);
  CHECK(j["steps"][0]["class"] == "incorrect");
  CHECK(j["steps"][1]["class"] == "certified");

  SimConfig cfg;
  cfg.n = 5;
  cfg.replications = 100;
  const auto s = simulate(cfg);
  const auto sj = sim_summary_json(s);
  CHECK(sj["config"]["seed"] == 42);
  CHECK(sj["build"] == kBuildId);
  const auto csv = sim_summary_csv(s);
  CHECK(csv.find("build,n,p,") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

  const auto rows = phase_transition_sweep({1.0}, {1.0}, {50});
  CHECK(phase_rows_json(rows)[0]["n"] == 50);
  CHECK(phase_rows_csv(rows).find("lambda,alpha") == 0);
}

TEST_CASE("csv forms") {
  CHECK(pmf_csv(xn_pmf<Rational>(2, Bias::half())) == "k,probability\n1,1/2\n2,1/2\n");
  CHECK(joint_csv(joint_pmf<Rational>(1, Bias::half())) == "luck,certified,probability\n0,1,1\n");
  CHECK(position_matrix_csv(position_matrix<Rational>(2, Bias::half())) == "1/2,1/2\n1/2,1/2\n");
}
