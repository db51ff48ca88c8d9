#pragma once

// Seeded simulation of shuffle + optimal play, distance measures against
// exact laws, and the p -> 1 sweep.
//
// Replication i draws from std::mt19937_64 seeded with
//   splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15),
// and flip k is "top" when (draw >> 11) * 2^-53 < p. All aggregates are
// integer sums, so results do not depend on the number of workers.

#include "exact_dist.hpp"
#include "rational.hpp"
#include "shuffle.hpp"
#include "strategy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace shelfguess {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t replication) {
  return splitmix64(seed + (replication + 1) * 0x9E3779B97F4A7C15ULL);
}

struct SimConfig {
  int n = 20;
  Bias p = Bias::half();
  std::uint64_t replications = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  TieBreak tie = TieBreak::smallest;
};

/// Integer sufficient statistics of a batch of games.
struct SimCounts {
  std::vector<std::uint64_t> x_hist;  // index k = number of games with X = k
  std::uint64_t games = 0;
  std::int64_t sum_x = 0, sum_l = 0, sum_c = 0;
  std::int64_t sum_xx = 0, sum_ll = 0, sum_cc = 0, sum_lc = 0;

  explicit SimCounts(int n = 0) : x_hist(static_cast<std::size_t>(n) + 1, 0) {}

  void add(const Totals& t) {
    ++games;
    ++x_hist[static_cast<std::size_t>(t.correct)];
    sum_x += t.correct;
    sum_l += t.luck;
    sum_c += t.certified;
    sum_xx += static_cast<std::int64_t>(t.correct) * t.correct;
    sum_ll += static_cast<std::int64_t>(t.luck) * t.luck;
    sum_cc += static_cast<std::int64_t>(t.certified) * t.certified;
    sum_lc += static_cast<std::int64_t>(t.luck) * t.certified;
  }

  SimCounts& operator+=(const SimCounts& o) {
    for (std::size_t k = 0; k < x_hist.size(); ++k) x_hist[k] += o.x_hist[k];
    games += o.games;
    sum_x += o.sum_x;
    sum_l += o.sum_l;
    sum_c += o.sum_c;
    sum_xx += o.sum_xx;
    sum_ll += o.sum_ll;
    sum_cc += o.sum_cc;
    sum_lc += o.sum_lc;
    return *this;
  }

  friend bool operator==(const SimCounts&, const SimCounts&) = default;
};

struct SimSummary {
  SimConfig config;
  SimCounts counts;
  double mean_x = 0, mean_l = 0, mean_c = 0;
  double var_x = 0, var_l = 0, var_c = 0, cov_lc = 0;
  std::vector<double> empirical;  // empirical pmf of X
  std::optional<double> tv_to_exact;
  double ks_normal = 0;  // sup distance of standardised empirical CDF to Phi
  double seconds = 0;
  double games_per_second = 0;

  double stderr_l() const { return std::sqrt(var_l / static_cast<double>(counts.games)); }
  double stderr_c() const { return std::sqrt(var_c / static_cast<double>(counts.games)); }
  double stderr_x() const { return std::sqrt(var_x / static_cast<double>(counts.games)); }
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Total variation distance between two laws on 0..len-1 (missing = 0).
inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t len = std::max(a.size(), b.size());
  double s = 0;
  for (std::size_t k = 0; k < len; ++k) {
    const double x = k < a.size() ? a[k] : 0.0;
    const double y = k < b.size() ? b[k] : 0.0;
    s += std::abs(x - y);
  }
  return 0.5 * s;
}

/// sup_x |F(x) - Phi(x)| where F is the CDF of (K - mean) / sd, K ~ law on
/// 0..len-1. For a lattice law the sup is reached at a jump.
inline double ks_to_normal(const std::vector<double>& law, double mean, double sd) {
  double cdf = 0, worst = 0;
  for (std::size_t k = 0; k < law.size(); ++k) {
    const double phi = normal_cdf((static_cast<double>(k) - mean) / sd);
    worst = std::max(worst, std::abs(cdf - phi));
    cdf += law[k];
    worst = std::max(worst, std::abs(cdf - phi));
  }
  return worst;
}

/// Poisson(lambda) on 0..len-1 plus the mass above, returned separately.
inline std::vector<double> poisson_pmf(double lambda, std::size_t len, double* tail = nullptr) {
  std::vector<double> out(len, 0.0);
  double term = std::exp(-lambda), acc = 0;
  for (std::size_t k = 0; k < len; ++k) {
    out[k] = term;
    acc += term;
    term *= lambda / static_cast<double>(k + 1);
  }
  if (tail) *tail = std::max(0.0, 1.0 - acc);
  return out;
}

inline double tv_to_poisson(const std::vector<double>& law, double lambda) {
  double tail = 0;
  const auto po = poisson_pmf(lambda, law.size(), &tail);
  return total_variation(law, po) + 0.5 * tail;
}

inline SimCounts simulate_block(const SimConfig& cfg, std::uint64_t begin, std::uint64_t end) {
  SimCounts counts(cfg.n);
  for (std::uint64_t i = begin; i < end; ++i) {
    std::mt19937_64 rng(substream_seed(cfg.seed, i));
    const ShuffledDeck deck = shelf_shuffle(cfg.n, cfg.p, rng);
    counts.add(play_totals(deck, cfg.p, cfg.tie));
  }
  return counts;
}

inline SimSummary simulate(const SimConfig& cfg, const std::vector<double>* reference = nullptr) {
  require_deck_size(cfg.n);
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (cfg.replications + kBlock - 1) / kBlock;
  std::vector<SimCounts> partial(blocks, SimCounts(cfg.n));
  auto run = [&](unsigned worker, unsigned stride) {
    for (std::uint64_t b = worker; b < blocks; b += stride)
      partial[b] = simulate_block(cfg, b * kBlock, std::min(cfg.replications, (b + 1) * kBlock));
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(cfg.workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  }

  SimSummary s;
  s.config = cfg;
  s.counts = SimCounts(cfg.n);
  for (const auto& part : partial) s.counts += part;

  const double g = static_cast<double>(s.counts.games);
  s.mean_x = static_cast<double>(s.counts.sum_x) / g;
  s.mean_l = static_cast<double>(s.counts.sum_l) / g;
  s.mean_c = static_cast<double>(s.counts.sum_c) / g;
  s.var_x = static_cast<double>(s.counts.sum_xx) / g - s.mean_x * s.mean_x;
  s.var_l = static_cast<double>(s.counts.sum_ll) / g - s.mean_l * s.mean_l;
  s.var_c = static_cast<double>(s.counts.sum_cc) / g - s.mean_c * s.mean_c;
  s.cov_lc = static_cast<double>(s.counts.sum_lc) / g - s.mean_l * s.mean_c;
  s.empirical.resize(s.counts.x_hist.size());
  for (std::size_t k = 0; k < s.empirical.size(); ++k) s.empirical[k] = static_cast<double>(s.counts.x_hist[k]) / g;
  if (reference) s.tv_to_exact = total_variation(s.empirical, *reference);
  if (s.var_x > 0) s.ks_normal = ks_to_normal(s.empirical, s.mean_x, std::sqrt(s.var_x));

  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  s.games_per_second = s.seconds > 0 ? g / s.seconds : 0;
  return s;
}

struct PhaseRow {
  double lambda = 0, alpha = 0;
  int n = 0;
  double p = 0;
  double identity_prob = 0;
  /// exp(-lambda n^(1-alpha)), the first-order value of p^(n-1).
  double first_order = 0;
  /// Limit of P{X_n = n}: 0 for alpha < 1, e^-lambda at alpha = 1, 1 above.
  double limit = 0;
  bool has_law = false;
  double mean_deficit = 0, var_deficit = 0, tv_poisson = 0;
};

inline std::vector<PhaseRow> phase_transition_sweep(const std::vector<double>& lambdas, const std::vector<double>& alphas,
                                                    const std::vector<int>& ns, int law_limit = 20000) {
  std::vector<PhaseRow> rows;
  for (double lambda : lambdas)
    for (double alpha : alphas)
      for (int n : ns) {
        PhaseTransitionParams params{lambda, alpha, n};
        PhaseRow r;
        r.lambda = lambda;
        r.alpha = alpha;
        r.n = n;
        r.p = params.p();
        r.identity_prob = identity_prob(params);
        r.first_order = std::exp(-lambda * std::pow(static_cast<double>(n), 1.0 - alpha));
        r.limit = alpha < 1.0 ? 0.0 : alpha == 1.0 ? std::exp(-lambda) : 1.0;
        if (n <= law_limit) {
          const auto law = xn_pmf<double>(n, Bias(r.p));
          const auto deficit = deficit_law(law);
          double m1 = 0, m2 = 0;
          for (std::size_t k = 0; k < deficit.size(); ++k) {
            m1 += static_cast<double>(k) * deficit[k];
            m2 += static_cast<double>(k * k) * deficit[k];
          }
          r.has_law = true;
          r.mean_deficit = m1;
          r.var_deficit = m2 - m1 * m1;
          r.tv_poisson = tv_to_poisson(deficit, lambda);
        }
        rows.push_back(r);
      }
  return rows;
}

}  // namespace shelfguess
