#pragma once

// JSON and CSV forms of laws, matrices, games and simulation reports.
// Exact values are written as "a/b" strings, floating values as numbers.

#include "exact_dist.hpp"
#include "montecarlo.hpp"
#include "rational.hpp"
#include "shuffle.hpp"
#include "strategy.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef SHELFGUESS_VERSION
#define SHELFGUESS_VERSION "0.1.0"
#endif

namespace shelfguess {

using Json = nlohmann::ordered_json;

inline constexpr const char* kBuildId = SHELFGUESS_VERSION;

template <Scalar T>
constexpr Backend backend_of() {
  return std::same_as<T, Rational> ? Backend::exact : Backend::floating;
}

template <Scalar T>
Json scalar_json(const T& x) {
  if constexpr (std::same_as<T, Rational>)
    return x.get_str();
  else
    return x;
}

template <Scalar T>
T scalar_from_json(const Json& j) {
  if constexpr (std::same_as<T, Rational>) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("expected an exact value as \"a/b\"");
  } else {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
    throw std::invalid_argument("expected a number");
  }
}

inline std::string format_double(double x, int digits = 12) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

template <Scalar T>
std::string format_scalar(const T& x) {
  if constexpr (std::same_as<T, Rational>)
    return x.get_str();
  else
    return format_double(x);
}

/// {"k": value, ...} over the support, k increasing.
template <Scalar T>
Json pmf_compact_json(const Pmf<T>& law) {
  Json out = Json::object();
  for (std::size_t k = 0; k < law.probs.size(); ++k)
    if (law.probs[k] != 0) out[std::to_string(k)] = scalar_json(law.probs[k]);
  return out;
}

template <Scalar T>
Json pmf_json(const Pmf<T>& law) {
  Json entries = Json::array();
  for (std::size_t k = 0; k < law.probs.size(); ++k)
    if (law.probs[k] != 0) entries.push_back(Json::array({k, scalar_json(law.probs[k])}));
  return Json{{"n", law.n},
              {"p", law.p.str()},
              {"backend", to_string(backend_of<T>())},
              {"entries", entries},
              {"mean", scalar_json(law.mean())},
              {"variance", scalar_json(law.variance())}};
}

/// Accepts both the full form and the compact map.
template <Scalar T>
Pmf<T> pmf_from_json(const Json& j, int n, const Bias& p) {
  Pmf<T> law{n, p, std::vector<T>(static_cast<std::size_t>(n) + 1, T(0))};
  auto put = [&](long k, const Json& v) {
    if (k < 0 || k > n) throw std::out_of_range("support point " + std::to_string(k) + " outside 0.." + std::to_string(n));
    law.probs[static_cast<std::size_t>(k)] = scalar_from_json<T>(v);
  };
  if (j.contains("entries")) {
    for (const auto& e : j.at("entries")) put(e.at(0).get<long>(), e.at(1));
  } else {
    for (const auto& [key, v] : j.items()) put(std::stol(key), v);
  }
  return law;
}

template <Scalar T>
Pmf<T> pmf_from_json(const Json& j) {
  return pmf_from_json<T>(j, j.at("n").get<int>(), Bias::parse(j.at("p").get<std::string>()));
}

template <Scalar T>
Json joint_json(const JointPmf<T>& law) {
  Json entries = Json::array();
  for (int l = 0; l <= law.n(); ++l)
    for (int c = 0; l + c <= law.n(); ++c)
      if (law(l, c) != 0) entries.push_back(Json::array({l, c, scalar_json(law(l, c))}));
  const auto m = moments(law);
  return Json{{"n", law.n()},
              {"p", law.p().str()},
              {"backend", to_string(backend_of<T>())},
              {"entries", entries},
              {"mean_luck", scalar_json(*m.mean_luck)},
              {"mean_certified", scalar_json(*m.mean_certified)},
              {"var_luck", scalar_json(*m.var_luck)},
              {"var_certified", scalar_json(*m.var_certified)},
              {"cov", scalar_json(*m.cov)}};
}

template <Scalar T>
JointPmf<T> joint_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  JointPmf<T> law(n, Bias::parse(j.at("p").get<std::string>()));
  for (const auto& e : j.at("entries")) {
    const int l = e.at(0).get<int>(), c = e.at(1).get<int>();
    if (l < 0 || c < 0 || l + c > n) throw std::out_of_range("joint entry outside the triangle");
    law(l, c) = scalar_from_json<T>(e.at(2));
  }
  return law;
}

/// rows[i-1][j-1] = P{card i at position j}.
template <Scalar T>
Json position_matrix_json(const PositionMatrix<T>& m, const Bias& p) {
  Json rows = Json::array();
  for (int i = 1; i <= m.size(); ++i) {
    Json row = Json::array();
    for (int j = 1; j <= m.size(); ++j) row.push_back(scalar_json(m(i, j)));
    rows.push_back(row);
  }
  return Json{{"n", m.size()}, {"p", p.str()}, {"backend", to_string(backend_of<T>())}, {"rows", rows}};
}

template <Scalar T>
PositionMatrix<T> position_matrix_from_json(const Json& j) {
  const int n = j.at("n").get<int>();
  PositionMatrix<T> m(n);
  const auto& rows = j.at("rows");
  if (static_cast<int>(rows.size()) != n) throw std::invalid_argument("position matrix needs n rows");
  for (int i = 1; i <= n; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i - 1));
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("position matrix needs n columns");
    for (int j2 = 1; j2 <= n; ++j2) m(i, j2) = scalar_from_json<T>(row.at(static_cast<std::size_t>(j2 - 1)));
  }
  return m;
}

inline Json totals_json(const Totals& t) {
  return Json{{"correct", t.correct}, {"luck", t.luck}, {"certified", t.certified}};
}

inline Json game_record_json(const GameRecord& rec, const Bias& p) {
  Json steps = Json::array();
  for (std::size_t k = 0; k < rec.shown.size(); ++k)
    steps.push_back(Json{{"guess", rec.guesses[k]}, {"shown", rec.shown[k]}, {"class", std::string(to_string(rec.classes[k]))}});
  return Json{{"n", rec.deck.size()}, {"p", p.str()}, {"deck", rec.deck.order()}, {"steps", steps}, {"totals", totals_json(rec.totals)}};
}

inline Json sim_summary_json(const SimSummary& s) {
  Json hist = Json::array();
  for (auto h : s.counts.x_hist) hist.push_back(h);
  Json out{{"build", kBuildId},
           {"config",
            {{"n", s.config.n},
             {"p", s.config.p.str()},
             {"replications", s.config.replications},
             {"seed", s.config.seed},
             {"workers", s.config.workers},
             {"tie_break", s.config.tie == TieBreak::smallest ? "smallest" : "largest"}}},
           {"mean_x", s.mean_x},
           {"var_x", s.var_x},
           {"mean_luck", s.mean_l},
           {"mean_certified", s.mean_c},
           {"var_luck", s.var_l},
           {"var_certified", s.var_c},
           {"cov", s.cov_lc},
           {"stderr_luck", s.stderr_l()},
           {"stderr_certified", s.stderr_c()},
           {"histogram", hist},
           {"ks_normal", s.ks_normal},
           {"seconds", s.seconds},
           {"games_per_second", s.games_per_second}};
  if (s.tv_to_exact) out["tv_to_exact"] = *s.tv_to_exact;
  return out;
}

inline std::string sim_summary_csv(const SimSummary& s) {
  std::ostringstream os;
  os << "build,n,p,replications,seed,workers,mean_x,var_x,mean_luck,mean_certified,var_luck,var_certified,cov,"
        "stderr_luck,stderr_certified,ks_normal,tv_to_exact,seconds,games_per_second\n";
  os << kBuildId << ',' << s.config.n << ',' << s.config.p.str() << ',' << s.config.replications << ',' << s.config.seed
     << ',' << s.config.workers << ',' << format_double(s.mean_x) << ',' << format_double(s.var_x) << ','
     << format_double(s.mean_l) << ',' << format_double(s.mean_c) << ',' << format_double(s.var_l) << ','
     << format_double(s.var_c) << ',' << format_double(s.cov_lc) << ',' << format_double(s.stderr_l()) << ','
     << format_double(s.stderr_c()) << ',' << format_double(s.ks_normal) << ','
     << (s.tv_to_exact ? format_double(*s.tv_to_exact) : "") << ',' << format_double(s.seconds) << ','
     << format_double(s.games_per_second) << '\n';
  return os.str();
}

inline Json phase_rows_json(const std::vector<PhaseRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row{{"lambda", r.lambda}, {"alpha", r.alpha}, {"n", r.n}, {"p", r.p},
             {"identity_prob", r.identity_prob}, {"first_order", r.first_order}, {"limit", r.limit}};
    if (r.has_law) {
      row["mean_deficit"] = r.mean_deficit;
      row["var_deficit"] = r.var_deficit;
      row["tv_poisson"] = r.tv_poisson;
    }
    out.push_back(row);
  }
  return out;
}

inline std::string phase_rows_csv(const std::vector<PhaseRow>& rows) {
  std::ostringstream os;
  os << "lambda,alpha,n,p,identity_prob,first_order,limit,mean_deficit,var_deficit,tv_poisson\n";
  for (const auto& r : rows) {
    os << format_double(r.lambda) << ',' << format_double(r.alpha) << ',' << r.n << ',' << format_double(r.p, 17) << ','
       << format_double(r.identity_prob) << ',' << format_double(r.first_order) << ',' << format_double(r.limit);
    if (r.has_law)
      os << ',' << format_double(r.mean_deficit) << ',' << format_double(r.var_deficit) << ',' << format_double(r.tv_poisson);
    else
      os << ",,,";
    os << '\n';
  }
  return os.str();
}

template <Scalar T>
std::string pmf_csv(const Pmf<T>& law) {
  std::ostringstream os;
  os << "k,probability\n";
  for (std::size_t k = 0; k < law.probs.size(); ++k)
    if (law.probs[k] != 0) os << k << ',' << format_scalar(law.probs[k]) << '\n';
  return os.str();
}

template <Scalar T>
std::string joint_csv(const JointPmf<T>& law) {
  std::ostringstream os;
  os << "luck,certified,probability\n";
  for (int l = 0; l <= law.n(); ++l)
    for (int c = 0; l + c <= law.n(); ++c)
      if (law(l, c) != 0) os << l << ',' << c << ',' << format_scalar(law(l, c)) << '\n';
  return os.str();
}

template <Scalar T>
std::string position_matrix_csv(const PositionMatrix<T>& m) {
  std::ostringstream os;
  for (int i = 1; i <= m.size(); ++i) {
    for (int j = 1; j <= m.size(); ++j) os << (j > 1 ? "," : "") << format_scalar(m(i, j));
    os << '\n';
  }
  return os.str();
}

}  // namespace shelfguess
