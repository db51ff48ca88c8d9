#pragma once

// Interactive games over HTTP. GameService holds the sessions and does all
// validation; register_routes maps it onto an httplib::Server.
//
//   POST /api/session                {n, p, seed?, deck?}
//   POST /api/session/{id}/guess     {guess}
//   GET  /api/session/{id}
//   GET  /api/session/{id}/hint
//   GET  /api/exact/pmf              ?n=&p=&backend=
//   GET  /api/exact/joint            ?n=&p=&backend=
//   GET  /api/exact/position-matrix  ?n=&p=&backend=
//
// Errors come back as {"error": {"code", "message"}} with a 4xx status.

#include "exact_dist.hpp"
#include "rational.hpp"
#include "serialize.hpp"
#include "shuffle.hpp"
#include "strategy.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace shelfguess {

class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  Json body() const { return Json{{"error", {{"code", code_}, {"message", what()}}}}; }

 private:
  int status_;
  std::string code_;
};

struct ServiceOptions {
  std::chrono::seconds ttl{3600};
  int max_session_n = 1000;
  std::size_t max_sessions = 10000;
  int max_exact_pmf_n = 1000;
  int max_exact_joint_n = 160;
  int max_float_joint_n = 1000;
  int max_matrix_n = 200;
  std::function<std::chrono::steady_clock::time_point()> clock = [] { return std::chrono::steady_clock::now(); };
};

class GameService {
 public:
  explicit GameService(ServiceOptions options = {}) : opt_(std::move(options)), id_rng_(std::random_device{}()) {}

  Json create_session(const Json& body) {
    if (!body.is_object()) throw ApiError(400, "bad_request", "body must be a JSON object");
    const int n = int_field(body, "n");
    if (n < 1 || n > opt_.max_session_n)
      throw ApiError(400, "invalid_n", "n must be in 1.." + std::to_string(opt_.max_session_n));
    const Bias p = bias_field(body, "p");

    auto s = std::make_shared<Session>(n, p);
    if (body.contains("deck")) {
      std::vector<Label> order;
      try {
        order = body.at("deck").get<std::vector<Label>>();
        s->deck = ShuffledDeck(std::move(order));
      } catch (const std::exception& e) {
        throw ApiError(400, "invalid_deck", std::string("deck must be a permutation of 1..n: ") + e.what());
      }
      if (s->deck.size() != n) throw ApiError(400, "invalid_deck", "deck must have n cards");
      if (!s->deck.has_shelf_shape() || (p.is_one() && !s->deck.is_identity()))
        throw ApiError(400, "invalid_deck", "deck cannot come from a shelf shuffle with this p");
    } else {
      if (body.contains("seed")) {
        if (!body.at("seed").is_number_unsigned()) throw ApiError(400, "invalid_seed", "seed must be a non-negative integer");
        s->seed = body.at("seed").get<std::uint64_t>();
      } else {
        std::lock_guard lock(rng_mutex_);
        s->seed = id_rng_();
      }
      std::mt19937_64 rng(*s->seed);
      s->deck = shelf_shuffle(n, p, rng);
    }
    s->last_access = opt_.clock();

    std::unique_lock lock(store_mutex_);
    purge_locked();
    if (sessions_.size() >= opt_.max_sessions) throw ApiError(503, "too_many_sessions", "session store is full");
    std::string id;
    do {
      std::lock_guard rl(rng_mutex_);
      std::ostringstream os;
      os << std::hex << id_rng_() << id_rng_();
      id = os.str();
    } while (sessions_.count(id));
    s->id = id;
    sessions_.emplace(id, s);
    std::shared_lock sl(s->mutex);
    return view(*s);
  }

  Json submit_guess(const std::string& id, const Json& body) {
    auto s = find(id);
    std::unique_lock lock(s->mutex);
    if (s->state.remaining() == 0) throw ApiError(409, "finished", "game is already over");
    if (!body.is_object() || !body.contains("guess") || !body.at("guess").is_number_integer())
      throw ApiError(400, "invalid_guess", "body must be {\"guess\": label}");
    const long guess = body.at("guess").get<long>();
    if (guess < 1 || guess > s->n) throw ApiError(400, "invalid_guess", "guess must be in 1.." + std::to_string(s->n));
    if (!s->state.is_unseen(static_cast<Label>(guess)))
      throw ApiError(400, "invalid_guess", "label " + std::to_string(guess) + " has already been shown");

    const Label shown = s->deck.at(s->position + 1);
    const GuessClass cls = s->state.observe(shown, static_cast<Label>(guess));
    s->guesses.push_back(static_cast<Label>(guess));
    s->classes.push_back(cls);
    s->totals.add(cls);
    ++s->position;
    Json out = view(*s);
    out["last"] = Json{{"guess", guess}, {"shown", shown}, {"class", std::string(to_string(cls))}};
    return out;
  }

  Json get_session(const std::string& id) {
    auto s = find(id);
    std::shared_lock lock(s->mutex);
    return view(*s);
  }

  Json hint(const std::string& id) {
    auto s = find(id);
    std::shared_lock lock(s->mutex);
    if (s->state.remaining() == 0) throw ApiError(409, "finished", "game is already over");
    Json law = Json::object();
    if (s->p.is_exact()) {
      const auto probs = s->state.next_card_law<Rational>();
      for (std::size_t c = 0; c < probs.size(); ++c)
        if (probs[c] != 0) law[std::to_string(c + 1)] = probs[c].get_str();
    } else {
      const auto probs = s->state.next_card_law<double>();
      for (std::size_t c = 0; c < probs.size(); ++c)
        if (probs[c] != 0) law[std::to_string(c + 1)] = probs[c];
    }
    return Json{{"optimal_guess", s->state.next_guess()}, {"certified", s->state.next_card_certain()}, {"conditional_law", law}};
  }

  Json exact_pmf(int n, const Bias& p, Backend backend) const {
    check_exact_n(n, opt_.max_exact_pmf_n);
    return backend == Backend::exact ? pmf_json(xn_pmf<Rational>(n, p)) : pmf_json(xn_pmf<double>(n, p));
  }

  Json exact_joint(int n, const Bias& p, Backend backend) const {
    if (backend == Backend::exact) {
      check_exact_n(n, opt_.max_exact_joint_n);
      return joint_json(joint_pmf<Rational>(n, p));
    }
    check_exact_n(n, opt_.max_float_joint_n);
    return joint_json(joint_pmf<double>(n, p));
  }

  Json exact_position_matrix(int n, const Bias& p, Backend backend) const {
    check_exact_n(n, opt_.max_matrix_n);
    return backend == Backend::exact ? position_matrix_json(position_matrix<Rational>(n, p), p)
                                     : position_matrix_json(position_matrix<double>(n, p), p);
  }

  std::size_t session_count() const {
    std::shared_lock lock(store_mutex_);
    return sessions_.size();
  }

  std::size_t purge_expired() {
    std::unique_lock lock(store_mutex_);
    return purge_locked();
  }

  static Bias parse_bias(const std::string& text) {
    try {
      return Bias::parse(text);
    } catch (const std::exception& e) {
      throw ApiError(400, "invalid_p", e.what());
    }
  }

  static int parse_n(const std::string& text) {
    try {
      std::size_t used = 0;
      const long n = std::stol(text, &used);
      if (used != text.size() || n < 1 || n > 1000000) throw std::invalid_argument("n");
      return static_cast<int>(n);
    } catch (const std::exception&) {
      throw ApiError(400, "invalid_n", "n must be a positive integer, got '" + text + "'");
    }
  }

 private:
  struct Session {
    Session(int n_, const Bias& p_) : n(n_), p(p_), state(n_, p_) {}
    std::string id;
    int n;
    Bias p;
    std::optional<std::uint64_t> seed;
    ShuffledDeck deck;
    GuesserState state;
    int position = 0;
    std::vector<Label> guesses;
    std::vector<GuessClass> classes;
    Totals totals;
    std::chrono::steady_clock::time_point last_access;
    mutable std::shared_mutex mutex;
  };

  static int int_field(const Json& body, const char* key) {
    if (!body.contains(key) || !body.at(key).is_number_integer())
      throw ApiError(400, std::string("invalid_") + key, std::string(key) + " must be an integer");
    const long v = body.at(key).get<long>();
    if (v < -1000000000L || v > 1000000000L) throw ApiError(400, std::string("invalid_") + key, std::string(key) + " is out of range");
    return static_cast<int>(v);
  }

  static Bias bias_field(const Json& body, const char* key) {
    if (!body.contains(key)) return Bias::half();
    const auto& v = body.at(key);
    if (v.is_string()) return parse_bias(v.get<std::string>());
    if (v.is_number()) {
      try {
        return Bias(v.get<double>());
      } catch (const std::exception& e) {
        throw ApiError(400, "invalid_p", e.what());
      }
    }
    throw ApiError(400, "invalid_p", "p must be a string like \"1/2\" or a number");
  }

  static void check_exact_n(int n, int cap) {
    if (n < 1) throw ApiError(400, "invalid_n", "n must be >= 1");
    if (n > cap) throw ApiError(400, "too_large", "n is limited to " + std::to_string(cap) + " for this endpoint");
  }

  std::shared_ptr<Session> find(const std::string& id) {
    const auto now = opt_.clock();
    std::unique_lock lock(store_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw ApiError(404, "not_found", "no session '" + id + "'");
    if (now - it->second->last_access > opt_.ttl) {
      sessions_.erase(it);
      throw ApiError(404, "not_found", "session '" + id + "' has expired");
    }
    it->second->last_access = now;
    return it->second;
  }

  std::size_t purge_locked() {
    const auto now = opt_.clock();
    std::size_t removed = 0;
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (now - it->second->last_access > opt_.ttl) {
        it = sessions_.erase(it);
        ++removed;
      } else {
        ++it;
      }
    }
    return removed;
  }

  static Json view(const Session& s) {
    Json history = Json::array();
    for (std::size_t k = 0; k < s.guesses.size(); ++k)
      history.push_back(Json{{"guess", s.guesses[k]},
                             {"shown", s.deck.order()[k]},
                             {"class", std::string(to_string(s.classes[k]))}});
    const bool finished = s.state.remaining() == 0;
    Json out{{"id", s.id},
             {"n", s.n},
             {"p", s.p.str()},
             {"position", s.position},
             {"remaining", s.state.remaining()},
             {"finished", finished},
             {"history", history},
             {"totals", totals_json(s.totals)}};
    if (s.seed) out["seed"] = *s.seed;
    if (finished) out["deck"] = s.deck.order();
    return out;
  }

  ServiceOptions opt_;
  mutable std::shared_mutex store_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex rng_mutex_;
  std::mt19937_64 id_rng_;
};

namespace detail {

inline void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    send_json(res, 200, f());
  } catch (const ApiError& e) {
    send_json(res, e.status(), e.body());
  } catch (const Json::exception& e) {
    send_json(res, 400, ApiError(400, "bad_json", e.what()).body());
  } catch (const std::invalid_argument& e) {
    send_json(res, 400, ApiError(400, "bad_request", e.what()).body());
  } catch (const std::domain_error& e) {
    send_json(res, 400, ApiError(400, "bad_request", e.what()).body());
  } catch (const std::exception& e) {
    send_json(res, 500, ApiError(500, "internal", e.what()).body());
  }
}

inline Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  return Json::parse(req.body);
}

inline std::string query(const httplib::Request& req, const char* key, const char* fallback = nullptr) {
  if (req.has_param(key)) return req.get_param_value(key);
  if (fallback) return fallback;
  throw ApiError(400, std::string("missing_") + key, std::string("query parameter '") + key + "' is required");
}

inline Backend query_backend(const httplib::Request& req) {
  try {
    return parse_backend(query(req, "backend", "exact"));
  } catch (const ApiError&) {
    throw;
  } catch (const std::exception& e) {
    throw ApiError(400, "invalid_backend", e.what());
  }
}

}  // namespace detail

inline void register_routes(httplib::Server& server, GameService& service) {
  using namespace detail;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/api/session", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return service.create_session(parse_body(req)); });
  });
  server.Post(R"(/api/session/([0-9a-f]+)/guess)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return service.submit_guess(req.matches[1], parse_body(req)); });
  });
  server.Get(R"(/api/session/([0-9a-f]+))", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return service.get_session(req.matches[1]); });
  });
  server.Get(R"(/api/session/([0-9a-f]+)/hint)", [&](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { return service.hint(req.matches[1]); });
  });
  auto exact = [&](auto method) {
    return [&service, method](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const int n = GameService::parse_n(query(req, "n"));
        const Bias p = GameService::parse_bias(query(req, "p", "1/2"));
        return (service.*method)(n, p, query_backend(req));
      });
    };
  };
  server.Get("/api/exact/pmf", exact(&GameService::exact_pmf));
  server.Get("/api/exact/joint", exact(&GameService::exact_joint));
  server.Get("/api/exact/position-matrix", exact(&GameService::exact_position_matrix));
  server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, Json{{"status", "ok"}, {"build", kBuildId}});
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_json(res, res.status, ApiError(res.status, "not_found", "no such route").body());
  });
}

}  // namespace shelfguess
