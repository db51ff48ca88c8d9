#pragma once

// The twelve acceptance checks. Each returns a pass flag and a one-line
// detail with the observed values; both the acceptance binary and the CLI
// `acceptance` subcommand print them.

#include "exact_dist.hpp"
#include "montecarlo.hpp"
#include "oracle.hpp"
#include "rational.hpp"
#include "series.hpp"
#include "shuffle.hpp"
#include "strategy.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace shelfguess {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0;

  std::string line() const {
    std::ostringstream os;
    os << (passed ? "PASS" : "FAIL") << "  [" << id << "] " << title << " -- " << detail << " (" << format_seconds() << ")";
    return os.str();
  }

 private:
  std::string format_seconds() const {
    std::ostringstream os;
    os.precision(3);
    os << seconds << "s";
    return os.str();
  }
};

namespace acceptance {

// Records the first failure and keeps going so the detail stays short.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      ++failures_;
      if (first_.empty()) first_ = what;
    }
  }
  bool ok() const { return failures_ == 0; }
  std::string summary(const std::string& extra = "") const {
    std::ostringstream os;
    os << checks_ << " checks";
    if (!ok()) os << ", " << failures_ << " failed, first: " << first_;
    if (!extra.empty()) os << "; " << extra;
    return os.str();
  }

 private:
  long checks_ = 0, failures_ = 0;
  std::string first_;
};

inline std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

inline const std::vector<Bias>& oracle_grid() {
  static const std::vector<Bias> g{Bias::half(), Bias::parse("3/10"), Bias::parse("3/4"), Bias::parse("9/10")};
  return g;
}

inline CriterionResult mean_variance() {
  Tally t;
  const auto table = xn_pmf_table<Rational>(300, Bias::half());
  for (int n = 2; n <= 300; ++n) {
    const auto& law = table[static_cast<std::size_t>(n)];
    t.check(law.total() == 1, "mass at n=" + std::to_string(n));
    t.check(law.mean() == frac(3 * n, 4), "mean at n=" + std::to_string(n));
    if (n >= 3) t.check(law.variance() == frac(n, 16), "variance at n=" + std::to_string(n));
  }
  t.check(table[1].variance() == 0, "Var X_1");
  t.check(table[2].variance() == frac(1, 4), "Var X_2");
  return {1, "exact mean 3n/4 and variance n/16, n <= 300", t.ok(), t.summary("Var X_1 = 0, Var X_2 = 1/4")};
}

inline CriterionResult oracle_equivalence() {
  Tally t;
  for (const auto& p : oracle_grid()) {
    const auto laws = xn_pmf_table<Rational>(14, p);
    const auto joints = joint_pmf_table<Rational>(14, p);
    for (int n = 1; n <= 14; ++n) {
      const auto r = enumerate_all<Rational>(n, p);
      const std::string at = "n=" + std::to_string(n) + " p=" + p.str();
      t.check(r.total.same_law(laws[static_cast<std::size_t>(n)]), "X law " + at);
      t.check(r.joint == joints[static_cast<std::size_t>(n)], "joint law " + at);
    }
  }
  return {2, "DP laws equal brute-force enumeration, n <= 14", t.ok(), t.summary("p in {1/2, 3/10, 3/4, 9/10}")};
}

inline CriterionResult refined_moments() {
  Tally t;
  const auto joints = joint_pmf_table<Rational>(128, Bias::half());
  std::vector<MomentSummary<Rational>> m(joints.size());
  for (int n = 1; n <= 128; ++n) m[static_cast<std::size_t>(n)] = moments(joints[static_cast<std::size_t>(n)]);
  for (int n = 3; n <= 128; ++n) {
    const auto& s = m[static_cast<std::size_t>(n)];
    const std::string at = " at n=" + std::to_string(n);
    t.check(*s.mean_luck == frac(n, 4), "E L" + at);
    t.check(*s.mean_certified == frac(n, 2), "E C" + at);
    t.check(*s.var_luck == frac(5 * n - 4, 16), "Var L" + at);
    t.check(*s.var_certified == frac(n - 2, 4), "Var C" + at);
    t.check(*s.cov == frac(3 - 2 * n, 8), "Cov" + at);
    t.check(*s.var_luck + *s.var_certified + 2 * *s.cov == frac(n, 16), "variance identity" + at);
    if (n >= 4) {
      const auto& prev = m[static_cast<std::size_t>(n - 1)];
      t.check(*s.var_luck - *prev.var_luck == frac(5, 16), "slope of Var L" + at);
      t.check(*s.var_certified - *prev.var_certified == frac(1, 4), "slope of Var C" + at);
      t.check(*s.cov - *prev.cov == frac(-1, 4), "slope of Cov" + at);
    }
  }
  return {3, "refined moments of (L, C) at p = 1/2, n <= 128", t.ok(),
          t.summary("Var L = (5n-4)/16, Var C = (n-2)/4, Cov = (3-2n)/8; slopes 5/16, 1/4, -1/4")};
}

inline CriterionResult position_matrix_checks() {
  Tally t;
  const std::vector<Bias> grid{Bias::parse("1/10"), Bias::parse("3/10"), Bias::half(), Bias::parse("2/3"),
                               Bias::parse("9/10")};
  for (const auto& p : grid)
    for (int n = 1; n <= 64; ++n) {
      const auto m = position_matrix<Rational>(n, p);
      const std::string at = " n=" + std::to_string(n) + " p=" + p.str();
      for (int k = 1; k <= n; ++k) {
        t.check(m.row_sum(k) == 1, "row sum" + at);
        t.check(m.column_sum(k) == 1, "column sum" + at);
      }
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
          const bool in_support = j <= i || j >= n - i + 1;
          t.check((m(i, j) != 0) == in_support, "support" + at);
          if (p.exact() == frac(1, 2)) t.check(m(i, j) == m(i, n + 1 - j), "mirror symmetry" + at);
        }
      if (n <= 12) t.check(m == enumerate_all<Rational>(n, p).positions, "oracle" + at);
    }
  return {4, "position matrix: doubly stochastic, support, symmetry, oracle", t.ok(),
          t.summary("n <= 64, p in {1/10, 3/10, 1/2, 2/3, 9/10}; oracle n <= 12")};
}

inline CriterionResult gf_cross_check() {
  Tally t;
  for (const auto& p : {Bias::half(), Bias::parse("3/4"), Bias::parse("9/10")}) {
    const auto series = gf_series_total(60, p);
    const auto laws = xn_pmf_table<Rational>(60, p);
    for (int n = 1; n <= 60; ++n)
      t.check(series[static_cast<std::size_t>(n - 1)] == generating_polynomial(laws[static_cast<std::size_t>(n)]),
              "total series n=" + std::to_string(n) + " p=" + p.str());
  }
  const auto joint_series = gf_series_joint(40);
  const auto joints = joint_pmf_table<Rational>(40, Bias::half());
  for (int n = 1; n <= 40; ++n)
    t.check(joint_series[static_cast<std::size_t>(n - 1)] == generating_polynomial(joints[static_cast<std::size_t>(n)]),
            "joint series n=" + std::to_string(n));
  const bool linear_rejected =
      !(expand(gf::symmetric_total_linear_typo(), 2)[1] == generating_polynomial(xn_pmf<Rational>(2, Bias::half())));
  t.check(linear_rejected, "linear-z denominator should not reproduce X_2");
  return {5, "generating-function series equal DP polynomials", t.ok(),
          t.summary("total n <= 60 at p in {1/2, 3/4, 9/10}; joint n <= 40 at p = 1/2; z-linear denominator rejected")};
}

inline CriterionResult asymmetric_moments() {
  Tally t;
  for (const auto& p : {Bias::half(), Bias::parse("3/5"), Bias::parse("3/4"), Bias::parse("9/10")}) {
    const auto laws = xn_pmf_table<Rational>(200, p);
    for (int n = 3; n <= 200; ++n) {
      const auto c = closed_form_moments<Rational>(n, p);
      const auto& law = laws[static_cast<std::size_t>(n)];
      const std::string at = " n=" + std::to_string(n) + " p=" + p.str();
      t.check(law.mean() == c.mean, "mean" + at);
      t.check(law.variance() == c.variance, "variance" + at);
    }
  }
  return {6, "closed-form mean and variance for 1/2 <= p < 1, 3 <= n <= 200", t.ok(),
          t.summary("p in {1/2, 3/5, 3/4, 9/10}")};
}

inline CriterionResult binomial_regime() {
  Tally t;
  std::ostringstream extra;
  for (const auto& [text, expected_nu] : std::vector<std::pair<std::string, int>>{{"1/5", 8}, {"3/10", 4}}) {
    const Bias p = Bias::parse(text);
    const int nu = nu_threshold(p);
    t.check(nu == expected_nu, "threshold for p=" + text);
    const auto laws = xn_pmf_table<Rational>(nu + 1, p);
    for (int n = 1; n <= nu; ++n)
      t.check(laws[static_cast<std::size_t>(n)].same_law(binomial_regime_pmf<Rational>(n, p)),
              "binomial law n=" + std::to_string(n) + " p=" + text);
    // One past the threshold the law leaves the binomial family.
    Pmf<Rational> shifted{nu + 1, p, std::vector<Rational>(static_cast<std::size_t>(nu) + 2, Rational(0))};
    const Rational q = 1 - p.exact();
    for (int k = 0; k <= nu; ++k)
      shifted.probs[static_cast<std::size_t>(k + 1)] = Rational(binomial(static_cast<std::uint64_t>(nu), static_cast<std::uint64_t>(k))) *
                                                       pow_int(q, static_cast<std::uint64_t>(k)) *
                                                       pow_int(p.exact(), static_cast<std::uint64_t>(nu - k));
    t.check(!laws[static_cast<std::size_t>(nu + 1)].same_law(shifted), "law at nu+1 should differ, p=" + text);
    extra << "p=" << text << " nu=" << nu << " ";
  }
  return {7, "X_n = 1 + Bin(n-1, 1-p) for n <= nu, not at nu+1", t.ok(), t.summary(extra.str())};
}

inline CriterionResult identity_probability() {
  Tally t;
  for (const auto& p : {Bias::half(), Bias::parse("3/5"), Bias::parse("3/4"), Bias::parse("9/10"), Bias::parse("1")})
    for (int n = 1; n <= 12; ++n) {
      const auto r = enumerate_all<Rational>(n, p);
      const Rational expected = pow_int(p.exact(), static_cast<std::uint64_t>(n - 1));
      const std::string at = " n=" + std::to_string(n) + " p=" + p.str();
      t.check(r.total.at(n) == expected, "P{X_n = n} = p^(n-1)" + at);
      t.check(identity_prob<Rational>(n, p) == expected, "identity_prob" + at);
      if (n >= 2 && !p.is_one()) t.check(r.total.at(n) != pow_int(p.exact(), static_cast<std::uint64_t>(n)), "p^n differs" + at);
    }
  const double ip = identity_prob(PhaseTransitionParams{1.0, 1.0, 10000});
  const double gap = std::abs(ip - std::exp(-1.0));
  t.check(gap <= 1e-3, "lambda=1 alpha=1 n=1e4");
  const double near_one = identity_prob(PhaseTransitionParams{1.0, 2.0, 100});
  t.check(std::abs(near_one - std::pow(1 - 1e-4, 99)) <= 1e-12, "alpha=2 n=100");
  return {8, "P{X_n = n} = p^(n-1) by enumeration (p^n rejected); phase limit", t.ok(),
          t.summary("n<=12 for p in {1/2, 3/5, 3/4, 9/10, 1}; lambda=1, alpha=1, n=1e4: " + fmt(ip, 10) +
                    " vs e^-1, gap " + fmt(gap, 3) + "; alpha=2, n=100: " + fmt(near_one, 8))};
}

inline CriterionResult clt() {
  const int n = 4096;
  const auto law = xn_pmf<double>(n, Bias::half());
  const double ks = ks_to_normal(law.probs, 0.75 * n, std::sqrt(n / 16.0));
  return {9, "CLT: float DP at n = 4096, p = 1/2, KS to Phi <= 0.03", ks <= 0.03,
          "KS = " + fmt(ks, 5) + ", mass " + fmt(law.total(), 15)};
}

inline CriterionResult poisson_regime() {
  const int n = 5000;
  const Bias p(1.0 - 2.0 / n);
  const auto law = xn_pmf<double>(n, p);
  const auto z = deficit_law(law);
  const double tv = tv_to_poisson(z, 2.0);
  double m1 = 0, m2 = 0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    m1 += static_cast<double>(k) * z[k];
    m2 += static_cast<double>(k * k) * z[k];
  }
  return {10, "Poisson regime (exploratory): p = 1 - 2/n, n = 5000, TV <= 0.02", tv <= 0.02,
          "observed TV = " + fmt(tv, 5) + ", E Z = " + fmt(m1, 6) + ", Var Z = " + fmt(m2 - m1 * m1, 6)};
}

inline CriterionResult monte_carlo() {
  Tally t;
  SimConfig cfg;
  cfg.n = 20;
  cfg.replications = 100000;
  cfg.seed = 42;
  const auto exact = xn_pmf<double>(20, Bias::half());
  const auto a = simulate(cfg, &exact.probs);
  const auto b = simulate(cfg, &exact.probs);
  cfg.workers = 4;
  const auto c = simulate(cfg, &exact.probs);
  t.check(*a.tv_to_exact <= 0.01, "TV");
  const double zl = (a.mean_l - 5.0) / a.stderr_l(), zc = (a.mean_c - 10.0) / a.stderr_c();
  t.check(std::abs(zl) <= 4, "E L within 4 SE");
  t.check(std::abs(zc) <= 4, "E C within 4 SE");
  t.check(a.counts == b.counts && a.mean_l == b.mean_l && a.var_x == b.var_x && *a.tv_to_exact == *b.tv_to_exact,
          "rerun identical");
  t.check(a.counts == c.counts, "worker count invariance");
  return {11, "Monte Carlo: n = 20, 1e5 games, seed 42", t.ok(),
          t.summary("TV = " + fmt(*a.tv_to_exact, 4) + ", E L = " + fmt(a.mean_l) + " (z " + fmt(zl, 3) + "), E C = " +
                    fmt(a.mean_c) + " (z " + fmt(zc, 3) + "), rerun bit-identical")};
}

/// Root of p = (1-p)^3 by Newton's method.
inline double tie_point() {
  double p = 0.3;
  for (int it = 0; it < 200; ++it) {
    const double step = (p - std::pow(1 - p, 3)) / (1 + 3 * (1 - p) * (1 - p));
    p -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return p;
}

inline CriterionResult optimality() {
  Tally t;
  std::size_t prefixes = 0;
  for (const auto& p : {Bias::parse("3/10"), Bias::half(), Bias::parse("3/4")})
    for (int n = 1; n <= 9; ++n) {
      const auto rep = verify_strategy_optimality<Rational>(n, p);
      prefixes += rep.prefixes_checked;
      t.check(rep.passed(), rep.summary());
    }
  const double ps = tie_point();
  t.check(std::abs(ps - std::pow(1 - ps, 3)) <= 1e-12, "tie point residual");
  std::string roots;
  for (auto tie : {TieBreak::smallest, TieBreak::largest}) {
    const auto rep = verify_strategy_optimality<double>(4, Bias(ps), tie);
    t.check(rep.passed(), "tie point " + rep.summary());
    t.check(rep.root_argmax == std::vector<Label>{1, 4}, "both opening guesses optimal at the tie point");
    roots.clear();
    for (Label c : rep.root_argmax) roots += (roots.empty() ? "" : ",") + std::to_string(c);
  }
  return {12, "strategy optimality on every prefix, n <= 9; tie point at n = 4", t.ok(),
          t.summary(std::to_string(prefixes) + " prefixes; p* = " + fmt(ps, 12) + ", opening argmax {" + roots + "}")};
}

}  // namespace acceptance

inline const std::vector<std::function<CriterionResult()>>& acceptance_criteria() {
  static const std::vector<std::function<CriterionResult()>> all{
      acceptance::mean_variance,   acceptance::oracle_equivalence,   acceptance::refined_moments,
      acceptance::position_matrix_checks, acceptance::gf_cross_check, acceptance::asymmetric_moments,
      acceptance::binomial_regime, acceptance::identity_probability, acceptance::clt,
      acceptance::poisson_regime,  acceptance::monte_carlo,          acceptance::optimality};
  return all;
}

/// Runs criterion `id` (1-based), timing it and turning exceptions into failures.
inline CriterionResult run_criterion(int id) {
  const auto& all = acceptance_criteria();
  if (id < 1 || id > static_cast<int>(all.size()))
    throw std::out_of_range("criterion must be in 1.." + std::to_string(all.size()));
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = all[static_cast<std::size_t>(id - 1)]();
  } catch (const std::exception& e) {
    r.id = id;
    r.title = "criterion " + std::to_string(id);
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace shelfguess
