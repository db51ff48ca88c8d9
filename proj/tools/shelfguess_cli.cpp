// shelfguess: command-line front end for the library.

#include <shelfguess/acceptance.hpp>
#include <shelfguess/exact_dist.hpp>
#include <shelfguess/game_server.hpp>
#include <shelfguess/montecarlo.hpp>
#include <shelfguess/oracle.hpp>
#include <shelfguess/serialize.hpp>
#include <shelfguess/series.hpp>
#include <shelfguess/shuffle.hpp>
#include <shelfguess/strategy.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

using namespace shelfguess;

namespace {

enum class Format { table, json, csv };

struct Common {
  int n = 10;
  std::string p = "1/2";
  std::string backend = "exact";
  std::string format = "table";
  std::string tie = "smallest";

  Bias bias() const { return Bias::parse(p); }
  Backend numeric() const { return parse_backend(backend); }
  Format fmt() const { return format == "json" ? Format::json : format == "csv" ? Format::csv : Format::table; }
  TieBreak tie_break() const { return tie == "largest" ? TieBreak::largest : TieBreak::smallest; }
};

void add_n(CLI::App* cmd, Common& c) { cmd->add_option("--n", c.n, "number of cards")->required(); }
void add_p(CLI::App* cmd, Common& c) {
  cmd->add_option("--p", c.p, "top-placement probability, \"a/b\" or decimal")->capture_default_str();
}
void add_backend(CLI::App* cmd, Common& c) {
  cmd->add_option("--backend", c.backend, "numeric backend")->check(CLI::IsMember({"exact", "float"}))->capture_default_str();
}
void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"table", "json", "csv"}))->capture_default_str();
}
void add_tie(CLI::App* cmd, Common& c) {
  cmd->add_option("--tie-break", c.tie, "guess used at an exact tie")->check(CLI::IsMember({"smallest", "largest"}))->capture_default_str();
}

template <Scalar T>
void print_pmf(const Pmf<T>& law, Format f, bool full) {
  if (f == Format::json) {
    std::cout << (full ? pmf_json(law) : pmf_compact_json(law)).dump() << '\n';
  } else if (f == Format::csv) {
    std::cout << pmf_csv(law);
  } else {
    std::cout << "X_" << law.n << " at p = " << law.p.str() << '\n';
    for (std::size_t k = 0; k < law.probs.size(); ++k)
      if (law.probs[k] != 0) std::cout << std::setw(6) << k << "  " << format_scalar(law.probs[k]) << '\n';
    std::cout << "mean " << format_scalar(law.mean()) << ", variance " << format_scalar(law.variance()) << '\n';
  }
}

template <Scalar T>
void print_joint(const JointPmf<T>& law, Format f) {
  if (f == Format::json) {
    std::cout << joint_json(law).dump() << '\n';
  } else if (f == Format::csv) {
    std::cout << joint_csv(law);
  } else {
    std::cout << "(L, C) for n = " << law.n() << " at p = " << law.p().str() << '\n';
    for (int l = 0; l <= law.n(); ++l)
      for (int c = 0; l + c <= law.n(); ++c)
        if (law(l, c) != 0) std::cout << std::setw(5) << l << std::setw(5) << c << "  " << format_scalar(law(l, c)) << '\n';
  }
}

template <Scalar T>
void print_moments(const Common& c, bool refined) {
  const Bias p = c.bias();
  const auto m = refined ? moments(joint_pmf<T>(c.n, p, c.tie_break())) : moments(xn_pmf<T>(c.n, p, c.tie_break()));
  if (c.fmt() == Format::json) {
    Json j{{"n", c.n}, {"p", p.str()}, {"mean", scalar_json(m.mean)}, {"variance", scalar_json(m.variance)}};
    if (refined) {
      j["mean_luck"] = scalar_json(*m.mean_luck);
      j["mean_certified"] = scalar_json(*m.mean_certified);
      j["var_luck"] = scalar_json(*m.var_luck);
      j["var_certified"] = scalar_json(*m.var_certified);
      j["cov"] = scalar_json(*m.cov);
    }
    std::cout << j.dump() << '\n';
    return;
  }
  std::cout << "mean " << format_scalar(m.mean) << "\nvariance " << format_scalar(m.variance) << '\n';
  if (refined)
    std::cout << "mean_luck " << format_scalar(*m.mean_luck) << "\nmean_certified " << format_scalar(*m.mean_certified)
              << "\nvar_luck " << format_scalar(*m.var_luck) << "\nvar_certified " << format_scalar(*m.var_certified)
              << "\ncov " << format_scalar(*m.cov) << '\n';
}

template <Scalar T>
void print_matrix(const PositionMatrix<T>& m, const Bias& p, Format f) {
  if (f == Format::json) {
    std::cout << position_matrix_json(m, p).dump() << '\n';
  } else if (f == Format::csv) {
    std::cout << position_matrix_csv(m);
  } else {
    std::cout << "row i, column j: P{card i at position j}\n";
    for (int i = 1; i <= m.size(); ++i) {
      for (int j = 1; j <= m.size(); ++j) std::cout << (j > 1 ? "  " : "") << std::setw(10) << format_scalar(m(i, j));
      std::cout << '\n';
    }
  }
}

std::vector<Label> parse_deck(const std::string& text) {
  std::vector<Label> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

int run_oracle_check(const Common& c) {
  const Bias p = c.bias();
  const auto r = enumerate_all<Rational>(c.n, p, c.tie_break());
  const auto law = xn_pmf<Rational>(c.n, p, c.tie_break());
  const auto joint = joint_pmf<Rational>(c.n, p, c.tie_break());
  const bool x_ok = r.total.same_law(law), joint_ok = r.joint == joint;
  const bool pos_ok = r.positions == position_matrix<Rational>(c.n, p);
  std::cout << "n = " << c.n << ", p = " << p.str() << ", " << r.sequences << " placement sequences\n"
            << "  X law:           " << (x_ok ? "equal" : "DIFFERENT") << '\n'
            << "  (L, C) law:      " << (joint_ok ? "equal" : "DIFFERENT") << '\n'
            << "  position matrix: " << (pos_ok ? "equal" : "DIFFERENT") << '\n';
  const bool ok = x_ok && joint_ok && pos_ok;
  std::cout << (ok ? "PASS: DP == enumeration" : "FAIL: DP != enumeration") << '\n';
  return ok ? 0 : 1;
}

int run_gf_check(int n_max, const Bias& p) {
  const auto series = gf_series_total(n_max, p);
  const auto laws = xn_pmf_table<Rational>(n_max, p);
  int bad = 0;
  for (int n = 1; n <= n_max; ++n)
    if (!(series[static_cast<std::size_t>(n - 1)] == generating_polynomial(laws[static_cast<std::size_t>(n)]))) {
      ++bad;
      std::cout << "total series differs at n = " << n << '\n';
    }
  const auto joint_series = gf_series_joint(n_max, p);
  const auto joints = joint_pmf_table<Rational>(n_max, p);
  for (int n = 1; n <= n_max; ++n)
    if (!(joint_series[static_cast<std::size_t>(n - 1)] == generating_polynomial(joints[static_cast<std::size_t>(n)]))) {
      ++bad;
      std::cout << "joint series differs at n = " << n << '\n';
    }
  std::cout << (bad == 0 ? "PASS" : "FAIL") << ": series coefficients vs DP for n <= " << n_max << " at p = " << p.str()
            << '\n';
  return bad == 0 ? 0 : 1;
}

int run_errata() {
  std::cout << "Stated forms checked against exact computation.\n\n";
  {
    const Bias p = Bias::parse("3/4");
    const auto r = enumerate_all<Rational>(5, p);
    std::cout << "1. P{X_n = n}\n   stated p^n, computed p^(n-1).\n   n = 5, p = 3/4: enumeration "
              << r.total.at(5).get_str() << ", p^(n-1) = " << pow_int(p.exact(), 4).get_str()
              << ", p^n = " << pow_int(p.exact(), 5).get_str() << "\n\n";
  }
  {
    const auto x2 = generating_polynomial(xn_pmf<Rational>(2, Bias::half()));
    std::cout << "2. Denominator of the p = 1/2 total series\n   stated (v^2-v)z, needed (v^2-v)z^2.\n"
              << "   [z^2] with z:   " << expand(gf::symmetric_total_linear_typo(), 2)[1].str() << '\n'
              << "   [z^2] with z^2: " << expand(gf::symmetric_total(), 2)[1].str() << '\n'
              << "   law of X_2:     " << x2.str() << "\n\n";
  }
  {
    const Bias p = Bias::parse("3/4");
    const auto joint3 = generating_polynomial(joint_pmf<Rational>(3, p));
    std::cout << "3. Biased (luck, certified) series\n   stated form has the marks exchanged; v must mark luck, w certified.\n"
              << "   n = 3, p = 3/4, law:    " << joint3.str() << '\n'
              << "   exchanged marks:        " << expand(gf::biased_joint_marks_swapped(p.exact()), 3)[2].str() << '\n'
              << "   corrected form:         " << expand(gf::biased_joint(p.exact()), 3)[2].str() << "\n\n";
  }
  {
    const auto m = moments(joint_pmf<Rational>(20, Bias::half()));
    std::cout << "4. Variances at p = 1/2 (n = 20)\n"
              << "   Var L = " << m.var_luck->get_str() << " = (5n-4)/16\n"
              << "   Var C = " << m.var_certified->get_str() << " = (n-2)/4\n"
              << "   Cov   = " << m.cov->get_str() << " = (3-2n)/8\n\n";
  }
  {
    const auto m = position_matrix<Rational>(6, Bias::half());
    std::cout << "5. Zeros of the position matrix\n   m[i][j] = 0 exactly when i+1 <= j <= n-i. n = 6, row 2: ";
    for (int j = 1; j <= 6; ++j) std::cout << m(2, j).get_str() << (j < 6 ? " " : "\n");
    std::cout << "   mirror symmetry m[i][j] = m[i][n+1-j] holds only at p = 1/2.\n\n";
  }
  {
    std::cout << "6. Limit of P{X_n = n} for p = 1 - lambda/n^alpha, lambda = 1\n";
    for (double alpha : {0.5, 1.0, 2.0}) {
      const auto rows = phase_transition_sweep({1.0}, {alpha}, {100000}, 0);
      std::cout << "   alpha = " << alpha << ": n = 1e5 gives " << acceptance::fmt(rows[0].identity_prob, 6) << ", limit "
                << acceptance::fmt(rows[0].limit, 6) << '\n';
    }
  }
  return 0;
}

int run_serve(std::string host, int port) {
  if (const char* h = std::getenv("SHELFGUESS_HOST"); h && host.empty()) host = h;
  if (const char* pt = std::getenv("SHELFGUESS_PORT"); pt && port == 0) port = std::atoi(pt);
  if (host.empty()) host = "127.0.0.1";
  if (port == 0) port = 8080;
  GameService service;
  httplib::Server server;
  register_routes(server, service);
  std::cerr << "listening on http://" << host << ":" << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "error: cannot listen on " << host << ":" << port << '\n';
    return 1;
  }
  return 0;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shelf-shuffle card guessing: exact laws, simulation, oracle checks and a game server"};
  app.require_subcommand(1);
  Common c;

  auto* pmf = app.add_subcommand("pmf", "law of the number of correct guesses X_n");
  bool full = false;
  add_n(pmf, c), add_p(pmf, c), add_backend(pmf, c), add_format(pmf, c), add_tie(pmf, c);
  pmf->add_flag("--full", full, "json with metadata instead of the compact {k: prob} map");

  auto* joint = app.add_subcommand("joint", "joint law of lucky and certified correct guesses");
  add_n(joint, c), add_p(joint, c), add_backend(joint, c), add_format(joint, c), add_tie(joint, c);

  auto* mom = app.add_subcommand("moments", "mean and variance of X_n");
  bool refined = false;
  add_n(mom, c), add_p(mom, c), add_backend(mom, c), add_format(mom, c), add_tie(mom, c);
  mom->add_flag("--refined", refined, "also moments of (L, C)");

  auto* pos = app.add_subcommand("position-matrix", "P{card i ends at position j}");
  add_n(pos, c), add_p(pos, c), add_backend(pos, c), add_format(pos, c);

  auto* first = app.add_subcommand("first-card", "law of the top card after the shuffle");
  add_n(first, c), add_p(first, c), add_backend(first, c), add_format(first, c);

  auto* play = app.add_subcommand("play", "shuffle once and play the optimal strategy");
  std::uint64_t seed = 42;
  std::string deck_text;
  add_n(play, c), add_p(play, c), add_format(play, c), add_tie(play, c);
  play->add_option("--seed", seed, "shuffle seed")->capture_default_str();
  play->add_option("--deck", deck_text, "play this deck instead, e.g. 2,3,1");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo over many shuffles");
  std::uint64_t reps = 100000;
  unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  add_n(sim, c), add_p(sim, c), add_format(sim, c), add_tie(sim, c);
  sim->add_option("--seed", seed, "base seed")->capture_default_str();
  sim->add_option("--reps", reps, "number of games")->check(CLI::PositiveNumber)->capture_default_str();
  sim->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle-check", "compare the DP with brute-force enumeration");
  add_n(oracle, c), add_p(oracle, c), add_tie(oracle, c);

  auto* gfc = app.add_subcommand("gf-check", "compare series coefficients with the DP");
  int nmax = 30;
  add_p(gfc, c);
  gfc->add_option("--nmax", nmax, "largest n")->check(CLI::Range(1, 200))->capture_default_str();

  auto* sweep = app.add_subcommand("phase-sweep", "p = 1 - lambda/n^alpha: identity probability and deficit law");
  std::string lambdas = "1,2", alphas = "0.5,1,2", ns = "100,1000,10000";
  int law_limit = 20000;
  add_format(sweep, c);
  sweep->add_option("--lambda", lambdas, "comma-separated lambdas")->capture_default_str();
  sweep->add_option("--alpha", alphas, "comma-separated alphas")->capture_default_str();
  sweep->add_option("--ns", ns, "comma-separated n")->capture_default_str();
  sweep->add_option("--law-limit", law_limit, "largest n for the full deficit law")->capture_default_str();

  auto* opt = app.add_subcommand("optimality-check", "verify the strategy on every prefix (n <= 9)");
  add_n(opt, c), add_p(opt, c), add_tie(opt, c);

  auto* errata = app.add_subcommand("errata", "stated formulas against exact computation");

  auto* serve = app.add_subcommand("serve", "HTTP game server");
  std::string host;
  int port = 0;
  serve->add_option("--host", host, "bind address (default SHELFGUESS_HOST or 127.0.0.1)");
  serve->add_option("--port", port, "port (default SHELFGUESS_PORT or 8080)")->check(CLI::Range(0, 65535));

  auto* acc = app.add_subcommand("acceptance", "run acceptance criteria");
  int criterion = 0;
  acc->add_option("--criterion", criterion, "criterion 1-12, or 0 for all")->check(CLI::Range(0, 12))->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const bool exact = c.backend == "exact";
    if (pmf->parsed()) {
      if (exact)
        print_pmf(xn_pmf<Rational>(c.n, c.bias(), c.tie_break()), c.fmt(), full);
      else
        print_pmf(xn_pmf<double>(c.n, c.bias(), c.tie_break()), c.fmt(), full);
    } else if (joint->parsed()) {
      if (exact)
        print_joint(joint_pmf<Rational>(c.n, c.bias(), c.tie_break()), c.fmt());
      else
        print_joint(joint_pmf<double>(c.n, c.bias(), c.tie_break()), c.fmt());
    } else if (mom->parsed()) {
      if (exact)
        print_moments<Rational>(c, refined);
      else
        print_moments<double>(c, refined);
    } else if (pos->parsed()) {
      require_deck_size(c.n);
      if (exact)
        print_matrix(position_matrix<Rational>(c.n, c.bias()), c.bias(), c.fmt());
      else
        print_matrix(position_matrix<double>(c.n, c.bias()), c.bias(), c.fmt());
    } else if (first->parsed()) {
      require_deck_size(c.n);
      auto emit = [&](const auto& law) {
        if (c.fmt() == Format::json) {
          Json j = Json::object();
          for (std::size_t i = 0; i < law.size(); ++i) j[std::to_string(i + 1)] = scalar_json(law[i]);
          std::cout << j.dump() << '\n';
        } else {
          if (c.fmt() == Format::csv) std::cout << "label,probability\n";
          for (std::size_t i = 0; i < law.size(); ++i)
            std::cout << (i + 1) << (c.fmt() == Format::csv ? "," : "  ") << format_scalar(law[i]) << '\n';
        }
      };
      if (exact)
        emit(first_card_law<Rational>(c.n, c.bias()));
      else
        emit(first_card_law<double>(c.n, c.bias()));
    } else if (play->parsed()) {
      const Bias p = c.bias();
      ShuffledDeck deck;
      if (!deck_text.empty()) {
        deck = ShuffledDeck(parse_deck(deck_text));
        if (deck.size() != c.n) throw std::invalid_argument("--deck must list n cards");
        if (!deck.has_shelf_shape()) throw std::invalid_argument("--deck cannot come from a shelf shuffle");
      } else {
        std::mt19937_64 rng(seed);
        deck = shelf_shuffle(c.n, p, rng);
      }
      const auto rec = play_game(deck, p, c.tie_break());
      if (c.fmt() == Format::json) {
        std::cout << game_record_json(rec, p).dump() << '\n';
      } else {
        if (c.fmt() == Format::csv) std::cout << "step,guess,shown,class\n";
        for (std::size_t k = 0; k < rec.shown.size(); ++k) {
          if (c.fmt() == Format::csv)
            std::cout << k + 1 << ',' << rec.guesses[k] << ',' << rec.shown[k] << ',' << to_string(rec.classes[k]) << '\n';
          else
            std::cout << std::setw(4) << k + 1 << "  guess " << std::setw(4) << rec.guesses[k] << "  shown " << std::setw(4)
                      << rec.shown[k] << "  " << to_string(rec.classes[k]) << '\n';
        }
        if (c.fmt() == Format::table)
          std::cout << rec.totals.correct << " correct: " << rec.totals.luck << " lucky, " << rec.totals.certified
                    << " certified\n";
      }
    } else if (sim->parsed()) {
      SimConfig cfg{c.n, c.bias(), reps, seed, workers, c.tie_break()};
      require_deck_size(c.n);
      std::vector<double> reference;
      if (c.n <= 20000) reference = xn_pmf<double>(c.n, cfg.p, cfg.tie).probs;
      const auto s = simulate(cfg, reference.empty() ? nullptr : &reference);
      if (c.fmt() == Format::json)
        std::cout << sim_summary_json(s).dump() << '\n';
      else if (c.fmt() == Format::csv)
        std::cout << sim_summary_csv(s);
      else
        std::cout << "games " << s.counts.games << " (seed " << seed << ", " << cfg.workers << " workers)\n"
                  << "E X = " << s.mean_x << "  Var X = " << s.var_x << '\n'
                  << "E L = " << s.mean_l << " +- " << s.stderr_l() << "  Var L = " << s.var_l << '\n'
                  << "E C = " << s.mean_c << " +- " << s.stderr_c() << "  Var C = " << s.var_c << '\n'
                  << "Cov(L, C) = " << s.cov_lc << '\n'
                  << "TV to exact law = " << (s.tv_to_exact ? format_double(*s.tv_to_exact) : "n/a") << '\n'
                  << "KS of standardised X to Phi = " << s.ks_normal << '\n'
                  << "throughput " << s.games_per_second << " games/s\n";
    } else if (oracle->parsed()) {
      return run_oracle_check(c);
    } else if (gfc->parsed()) {
      return run_gf_check(nmax, c.bias());
    } else if (sweep->parsed()) {
      std::vector<int> nlist;
      for (double x : parse_list(ns)) nlist.push_back(static_cast<int>(x));
      const auto rows = phase_transition_sweep(parse_list(lambdas), parse_list(alphas), nlist, law_limit);
      if (c.fmt() == Format::json) {
        std::cout << phase_rows_json(rows).dump() << '\n';
      } else if (c.fmt() == Format::csv) {
        std::cout << phase_rows_csv(rows);
      } else {
        std::cout << "lambda  alpha        n  P{X_n=n}     limit        E Z        Var Z      TV Poisson\n";
        for (const auto& r : rows) {
          std::cout << std::setw(6) << r.lambda << std::setw(7) << r.alpha << std::setw(9) << r.n << "  " << std::setw(11)
                    << format_double(r.identity_prob, 6) << "  " << std::setw(11) << format_double(r.limit, 6);
          if (r.has_law)
            std::cout << "  " << std::setw(9) << format_double(r.mean_deficit, 6) << "  " << std::setw(9)
                      << format_double(r.var_deficit, 6) << "  " << format_double(r.tv_poisson, 4);
          std::cout << '\n';
        }
      }
    } else if (opt->parsed()) {
      const auto rep = verify_strategy_optimality<Rational>(c.n, c.bias(), c.tie_break());
      std::cout << rep.summary() << '\n';
      return rep.passed() ? 0 : 1;
    } else if (errata->parsed()) {
      return run_errata();
    } else if (serve->parsed()) {
      return run_serve(host, port);
    } else if (acc->parsed()) {
      int failed = 0;
      const int lo = criterion == 0 ? 1 : criterion, hi = criterion == 0 ? 12 : criterion;
      for (int id = lo; id <= hi; ++id) {
        const auto r = run_criterion(id);
        std::cout << r.line() << std::endl;
        failed += r.passed ? 0 : 1;
      }
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
