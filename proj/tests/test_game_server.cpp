#include <shelfguess/game_server.hpp>

#include <doctest.h>

#include <thread>

using namespace shelfguess;

namespace {

const std::vector<Label> kDeck20 = {1, 2, 5, 10, 11, 19, 20, 18, 17, 16, 15, 14, 13, 12, 9, 8, 7, 6, 4, 3};

int status_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ApiError& e) {
    return e.status();
  }
  return 200;
}

}  // namespace

TEST_CASE("scripted n = 20 game following the hints") {
  GameService svc;
  const auto created = svc.create_session(Json{{"n", 20}, {"p", "1/2"}, {"deck", kDeck20}});
  const std::string id = created["id"];
  CHECK(created["finished"] == false);
  CHECK_FALSE(created.contains("deck"));
  GuesserState ref(20, Bias::half());
  Json last;
  for (Label shown : kDeck20) {
    const auto h = svc.hint(id);
    CHECK(h["optimal_guess"] == ref.next_guess());
    CHECK(h["certified"] == ref.next_card_certain());
    const Label g = h["optimal_guess"];
    ref.observe(shown, g);
    last = svc.submit_guess(id, Json{{"guess", g}});
    CHECK(last["last"]["shown"] == shown);
  }
  CHECK(last["finished"] == true);
  CHECK(last["totals"] == Json{{"correct", 17}, {"luck", 3}, {"certified", 14}});
  CHECK(last["deck"].get<std::vector<Label>>() == kDeck20);
  CHECK(status_of([&] { svc.submit_guess(id, Json{{"guess", 1}}); }) == 409);
  CHECK(status_of([&] { svc.hint(id); }) == 409);
}

TEST_CASE("hint law is exact") {
  GameService svc;
  const std::string id = svc.create_session(Json{{"n", 3}, {"p", "1/2"}, {"deck", {2, 3, 1}}})["id"];
  const auto h = svc.hint(id);
  CHECK(h["conditional_law"] == Json{{"1", "1/2"}, {"2", "1/4"}, {"3", "1/4"}});
  CHECK(h["optimal_guess"] == 1);
  svc.submit_guess(id, Json{{"guess", 1}});
  const auto h2 = svc.hint(id);
  CHECK(h2["conditional_law"] == Json{{"3", "1"}});
  CHECK(h2["certified"] == true);
  const auto step = svc.submit_guess(id, Json{{"guess", 3}});
  CHECK(step["last"]["class"] == "certified");
}

TEST_CASE("validation") {
  GameService svc;
  CHECK(status_of([&] { svc.create_session(Json{{"n", 0}}); }) == 400);
  CHECK(status_of([&] { svc.create_session(Json{{"n", 1001}}); }) == 400);
  CHECK(status_of([&] { svc.create_session(Json{{"n", 5}, {"p", "3/2"}}); }) == 400);
  CHECK(status_of([&] { svc.create_session(Json{{"n", 5}, {"p", "abc"}}); }) == 400);
  CHECK(status_of([&] { svc.create_session(Json{{"n", 3}, {"deck", {1, 3, 3}}}); }) == 400);
  CHECK(status_of([&] { svc.create_session(Json{{"n", 3}, {"deck", {3, 1, 2}}}); }) == 400);
  CHECK(status_of([&] { svc.create_session(Json{{"n", 3}, {"p", "1"}, {"deck", {1, 3, 2}}}); }) == 400);
  CHECK(status_of([&] { svc.get_session("ffff"); }) == 404);

  const std::string id = svc.create_session(Json{{"n", 4}, {"deck", {2, 4, 3, 1}}})["id"];
  CHECK(status_of([&] { svc.submit_guess(id, Json{{"guess", 5}}); }) == 400);
  CHECK(status_of([&] { svc.submit_guess(id, Json{{"guess", "2"}}); }) == 400);
  CHECK(status_of([&] { svc.submit_guess(id, Json::object()); }) == 400);
  svc.submit_guess(id, Json{{"guess", 1}});
  CHECK(status_of([&] { svc.submit_guess(id, Json{{"guess", 2}}); }) == 400);
  CHECK(svc.get_session(id)["position"] == 1);
}

TEST_CASE("seeded sessions replay the same deck") {
  GameService svc;
  auto play_out = [&](std::uint64_t seed) {
    const std::string id = svc.create_session(Json{{"n", 30}, {"p", "3/10"}, {"seed", seed}})["id"];
    Json s;
    for (int k = 0; k < 30; ++k) s = svc.submit_guess(id, Json{{"guess", svc.hint(id)["optimal_guess"]}});
    return s;
  };
  const auto a = play_out(99), b = play_out(99);
  CHECK(a["deck"] == b["deck"]);
  CHECK(a["totals"] == b["totals"]);
  CHECK(a["seed"] == 99);
  std::mt19937_64 rng(99);
  const auto deck = shelf_shuffle(30, Bias::parse("3/10"), rng);
  CHECK(a["deck"].get<std::vector<Label>>() == deck.order());
  CHECK(a["totals"] == totals_json(play_totals(deck, Bias::parse("3/10"))));
}

TEST_CASE("sessions expire after the ttl") {
  auto now = std::chrono::steady_clock::time_point{};
  ServiceOptions opt;
  opt.ttl = std::chrono::seconds(60);
  opt.clock = [&] { return now; };
  GameService svc(opt);
  const std::string id = svc.create_session(Json{{"n", 5}})["id"];
  now += std::chrono::seconds(59);
  CHECK(status_of([&] { svc.get_session(id); }) == 200);
  now += std::chrono::seconds(59);  // access refreshed the timer
  CHECK(status_of([&] { svc.hint(id); }) == 200);
  now += std::chrono::seconds(61);
  CHECK(status_of([&] { svc.get_session(id); }) == 404);
  svc.create_session(Json{{"n", 5}});
  now += std::chrono::seconds(61);
  CHECK(svc.purge_expired() == 1);
  CHECK(svc.session_count() == 0);
}

TEST_CASE("exact endpoints") {
  GameService svc;
  const auto pmf = svc.exact_pmf(4, Bias::half(), Backend::exact);
  CHECK(pmf["entries"] == Json::parse(R"([[2,"1/8"],[3,"3/4"],[4,"1/8"]])"));
  CHECK(pmf["mean"] == "3");
  const auto joint = svc.exact_joint(4, Bias::half(), Backend::exact);
  CHECK(joint["mean_luck"] == "1");
  CHECK(joint["mean_certified"] == "2");
  const auto m = svc.exact_position_matrix(3, Bias::half(), Backend::exact);
  CHECK(m["rows"][1] == Json{"1/4", "1/2", "1/4"});
  CHECK(svc.exact_pmf(50, Bias(0.7), Backend::floating)["backend"] == "float");
  CHECK(status_of([&] { svc.exact_joint(5000, Bias::half(), Backend::exact); }) == 400);
  CHECK(status_of([&] { svc.exact_pmf(0, Bias::half(), Backend::exact); }) == 400);
}

TEST_CASE("live HTTP round trip") {
  GameService svc;
  httplib::Server server;
  register_routes(server, svc);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  auto res = cli.Post("/api/session", Json{{"n", 3}, {"p", "1/2"}, {"deck", {2, 3, 1}}}.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  const std::string id = Json::parse(res->body)["id"];

  res = cli.Get("/api/session/" + id + "/hint");
  REQUIRE(res);
  CHECK(Json::parse(res->body)["optimal_guess"] == 1);
  res = cli.Post("/api/session/" + id + "/guess", R"({"guess": 9})", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  CHECK(Json::parse(res->body)["error"]["code"] == "invalid_guess");
  res = cli.Post("/api/session/" + id + "/guess", "{not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
  for (int g : {1, 3, 1}) {
    res = cli.Post("/api/session/" + id + "/guess", Json{{"guess", g}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
  }
  CHECK(Json::parse(res->body)["totals"] == Json{{"correct", 2}, {"luck", 0}, {"certified", 2}});

  res = cli.Get("/api/session/abc123");
  REQUIRE(res);
  CHECK(res->status == 404);
  res = cli.Get("/api/exact/pmf?n=4&p=1/2");
  REQUIRE(res);
  CHECK(Json::parse(res->body)["entries"][1][1] == "3/4");
  res = cli.Get("/api/exact/joint?n=3&p=0.75&backend=float");
  REQUIRE(res);
  CHECK(res->status == 200);
  res = cli.Get("/api/exact/position-matrix?n=3");
  REQUIRE(res);
  CHECK(res->status == 200);
  res = cli.Get("/api/exact/pmf?n=x");
  REQUIRE(res);
  CHECK(res->status == 400);
  res = cli.Get("/api/exact/pmf?n=3&backend=quad");
  REQUIRE(res);
  CHECK(res->status == 400);
  res = cli.Options("/api/session");
  REQUIRE(res);
  CHECK(res->status == 204);
  res = cli.Get("/nowhere");
  REQUIRE(res);
  CHECK(res->status == 404);

  server.stop();
  t.join();
}
