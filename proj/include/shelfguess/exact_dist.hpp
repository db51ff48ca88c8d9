#pragma once

// Exact laws of the number of correct guesses X_n and of the split
// (L_n, C_n) into luck and certified guesses.
//
// Both laws come from the first-card decomposition: if the first card shown
// has label j, the j-1 smaller labels are certified later and the labels
// above j behave as a fresh shuffle of n-j cards. The first guess scores
// when j equals the guessed label (1, or n in the biased top-label regime).
//
// Sum over j is carried by a running accumulator
//   A_m = sum_{j<m} p (1-p)^(j-1) * shift(law_{m-j}, j-1),
//   A_{m+1} = p law_m + (1-p) shift(A_m, 1),
// so the whole table costs O(n^2) for X and O(n^3) for (L, C).

#include "rational.hpp"
#include "shuffle.hpp"
#include "strategy.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shelfguess {

/// Law of X_n: probs[k] = P{X_n = k}, k = 0..n.
template <Scalar T>
struct Pmf {
  int n = 0;
  Bias p = Bias::half();
  std::vector<T> probs;

  T at(int k) const { return k >= 0 && k < static_cast<int>(probs.size()) ? probs[static_cast<std::size_t>(k)] : T(0); }

  T total() const {
    T s(0);
    for (const T& x : probs) s += x;
    return s;
  }
  T mean() const {
    T s(0);
    for (std::size_t k = 0; k < probs.size(); ++k) s += T(static_cast<long>(k)) * probs[k];
    return s;
  }
  T variance() const {
    T s(0);
    for (std::size_t k = 0; k < probs.size(); ++k) s += T(static_cast<long>(k * k)) * probs[k];
    const T mu = mean();
    return s - mu * mu;
  }

  bool same_law(const Pmf& other) const {
    const std::size_t len = std::max(probs.size(), other.probs.size());
    for (std::size_t k = 0; k < len; ++k)
      if (at(static_cast<int>(k)) != other.at(static_cast<int>(k))) return false;
    return true;
  }
};

/// Law of (L_n, C_n) on the square 0..n x 0..n.
template <Scalar T>
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(int n, Bias p) : n_(n), p_(std::move(p)), cells_(side() * side(), T(0)) {}

  int n() const { return n_; }
  const Bias& p() const { return p_; }

  T& operator()(int luck, int certified) { return cells_[index(luck, certified)]; }
  const T& operator()(int luck, int certified) const { return cells_[index(luck, certified)]; }

  /// Law of L + C.
  Pmf<T> total_law() const {
    Pmf<T> out{n_, p_, std::vector<T>(static_cast<std::size_t>(n_) + 1, T(0))};
    for (int l = 0; l <= n_; ++l)
      for (int c = 0; l + c <= n_; ++c) out.probs[static_cast<std::size_t>(l + c)] += (*this)(l, c);
    return out;
  }

  T total() const {
    T s(0);
    for (const T& x : cells_) s += x;
    return s;
  }

  friend bool operator==(const JointPmf& a, const JointPmf& b) { return a.n_ == b.n_ && a.cells_ == b.cells_; }

 private:
  std::size_t side() const { return static_cast<std::size_t>(n_) + 1; }
  std::size_t index(int l, int c) const {
    if (l < 0 || c < 0 || l > n_ || c > n_) throw std::out_of_range("joint law index outside 0..n");
    return static_cast<std::size_t>(l) * side() + static_cast<std::size_t>(c);
  }
  int n_ = 0;
  Bias p_ = Bias::half();
  std::vector<T> cells_;
};

template <Scalar T>
struct MomentSummary {
  T mean{0};
  T variance{0};
  // Set for joint summaries only.
  std::optional<T> mean_luck, mean_certified, var_luck, var_certified, cov;
};

template <Scalar T>
MomentSummary<T> moments(const Pmf<T>& law) {
  return {law.mean(), law.variance(), {}, {}, {}, {}, {}};
}

template <Scalar T>
MomentSummary<T> moments(const JointPmf<T>& law) {
  const int n = law.n();
  T el(0), ec(0), ell(0), ecc(0), elc(0);
  for (int l = 0; l <= n; ++l)
    for (int c = 0; l + c <= n; ++c) {
      const T& w = law(l, c);
      if (w == 0) continue;
      el += T(l) * w;
      ec += T(c) * w;
      ell += T(l * l) * w;
      ecc += T(c * c) * w;
      elc += T(l * c) * w;
    }
  MomentSummary<T> m;
  m.mean_luck = el;
  m.mean_certified = ec;
  m.var_luck = ell - el * el;
  m.var_certified = ecc - ec * ec;
  m.cov = elc - el * ec;
  m.mean = el + ec;
  m.variance = *m.var_luck + *m.var_certified + T(2) * *m.cov;
  return m;
}

/// Laws of X_m for every m = 0..n_max; entry m is the law for m cards.
template <Scalar T>
std::vector<Pmf<T>> xn_pmf_table(int n_max, const Bias& bias, TieBreak tie = TieBreak::smallest) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const T p = bias.as<T>();
  const T q = T(1) - p;
  std::vector<Pmf<T>> table;
  table.reserve(static_cast<std::size_t>(n_max) + 1);
  table.push_back({0, bias, {T(1)}});
  if (n_max >= 1) table.push_back({1, bias, {T(0), T(1)}});

  std::vector<T> acc;  // A_m, length m+1
  T tail(1);           // (1-p)^(m-1)
  for (int m = 2; m <= n_max; ++m) {
    const std::vector<T>& prev = table.back().probs;  // law_{m-1}
    // A_m = p law_{m-1} + (1-p) shift(A_{m-1}, 1)
    std::vector<T> next(static_cast<std::size_t>(m) + 1, T(0));
    for (std::size_t k = 0; k < prev.size(); ++k) next[k] = p * prev[k];
    for (std::size_t k = 0; k < acc.size(); ++k) next[k + 1] += q * acc[k];
    acc = next;
    tail *= q;

    std::vector<T> law = acc;
    law.resize(static_cast<std::size_t>(m) + 1, T(0));
    // j = m: every other card certified.
    const bool top_first = first_guess_is_top(m, bias, tie);
    law[static_cast<std::size_t>(top_first ? m : m - 1)] += tail;
    if (!top_first) {
      // j = 1 hit: move the p * law_{m-1} term up by one.
      for (std::size_t k = prev.size(); k-- > 0;) {
        const T moved = p * prev[k];
        law[k] -= moved;
        law[k + 1] += moved;
      }
    }
    table.push_back({m, bias, std::move(law)});
  }
  return table;
}

template <Scalar T>
Pmf<T> xn_pmf(int n, const Bias& bias, TieBreak tie = TieBreak::smallest) {
  require_deck_size(n);
  auto table = xn_pmf_table<T>(n, bias, tie);
  return std::move(table.back());
}

/// Laws of (L_m, C_m) for m = 0..n_max, each on its own 0..m square.
template <Scalar T>
std::vector<JointPmf<T>> joint_pmf_table(int n_max, const Bias& bias, TieBreak tie = TieBreak::smallest) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  const T p = bias.as<T>();
  const T q = T(1) - p;
  // With p = 1 the whole deck is known, so the opening guess is certified.
  const bool opening_certified = bias.is_one();

  std::vector<JointPmf<T>> table;
  table.reserve(static_cast<std::size_t>(n_max) + 1);
  JointPmf<T> s0(0, bias);
  s0(0, 0) = T(1);
  table.push_back(s0);
  if (n_max >= 1) {
    JointPmf<T> s1(1, bias);
    s1(0, 1) = T(1);
    table.push_back(s1);
  }

  JointPmf<T> acc(0, bias);  // A_1 = 0
  acc(0, 0) = T(0);
  T tail(1);
  for (int m = 2; m <= n_max; ++m) {
    const JointPmf<T>& prev = table.back();
    JointPmf<T> next(m, bias);
    for (int l = 0; l <= m - 1; ++l)
      for (int c = 0; l + c <= m - 1; ++c) {
        if (prev(l, c) != 0) next(l, c) += p * prev(l, c);
        // A_{m-1} lives on 0..m-2; a certified shift moves c by one.
        if (l + c <= m - 2 && acc(l, c) != 0) next(l, c + 1) += q * acc(l, c);
      }
    acc = next;
    tail *= q;

    JointPmf<T> law = acc;
    const bool top_first = first_guess_is_top(m, bias, tie);
    if (top_first)
      law(1, m - 1) += tail;
    else
      law(0, m - 1) += tail;
    if (!top_first) {
      for (int l = m - 1; l >= 0; --l)
        for (int c = m - 1 - l; c >= 0; --c) {
          if (prev(l, c) == 0) continue;
          const T moved = p * prev(l, c);
          law(l, c) -= moved;
          if (opening_certified)
            law(l, c + 1) += moved;
          else
            law(l + 1, c) += moved;
        }
    }
    table.push_back(std::move(law));
  }
  return table;
}

template <Scalar T>
JointPmf<T> joint_pmf(int n, const Bias& bias, TieBreak tie = TieBreak::smallest) {
  require_deck_size(n);
  auto table = joint_pmf_table<T>(n, bias, tie);
  return std::move(table.back());
}

/// Closed forms for 1/2 <= p <= 1: E X_n for n >= 2, Var X_n for n >= 3.
template <Scalar T>
MomentSummary<T> closed_form_moments(int n, const Bias& bias) {
  if (n < 2) throw std::domain_error("closed-form mean needs n >= 2");
  if (bias.below_half()) throw std::domain_error("closed-form moments need p >= 1/2; use the exact law for p = " + bias.str());
  const T p = bias.as<T>();
  const T q = T(1) - p;
  const T nn(n);
  MomentSummary<T> m;
  m.mean = (T(1) - p + p * p) * nn + T(3) * p - T(1) - T(2) * p * p;
  if (n >= 3) {
    m.variance = q * p * (T(3) * p * p - T(3) * p + T(1)) * nn + p * q * (T(10) * p - T(8) * p * p - T(3));
  } else {
    // X_2 is 1 + Bernoulli(p).
    m.variance = p * q;
  }
  return m;
}

/// Law of 1 + Bin(n-1, 1-p), which X_n follows while n stays at or below the
/// biased threshold.
template <Scalar T>
Pmf<T> binomial_regime_pmf(int n, const Bias& bias) {
  require_deck_size(n);
  const int nu = nu_threshold(bias);
  if (n > nu) throw std::domain_error("n = " + std::to_string(n) + " exceeds the threshold " + std::to_string(nu));
  const T p = bias.as<T>();
  const T q = T(1) - p;
  Pmf<T> out{n, bias, std::vector<T>(static_cast<std::size_t>(n) + 1, T(0))};
  for (int k = 0; k <= n - 1; ++k) {
    T coeff;
    if constexpr (std::same_as<T, Rational>)
      coeff = Rational(binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(k)));
    else
      coeff = binomial(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(k)).get_d();
    out.probs[static_cast<std::size_t>(k + 1)] =
        coeff * pow_int(q, static_cast<std::uint64_t>(k)) * pow_int(p, static_cast<std::uint64_t>(n - 1 - k));
  }
  return out;
}

/// p = 1 - lambda / n^alpha.
struct PhaseTransitionParams {
  double lambda = 1.0;
  double alpha = 1.0;
  int n = 1;

  double q() const { return lambda / std::pow(static_cast<double>(n), alpha); }
  double p() const {
    if (!(lambda > 0.0) || !(alpha > 0.0)) throw std::domain_error("lambda and alpha must be positive");
    if (q() >= 1.0) throw std::domain_error("lambda must be below n^alpha so that p lies in (0,1)");
    return 1.0 - q();
  }
};

/// P{identity deck} = p^(n-1), which is P{X_n = n} whenever p >= 1/2.
template <Scalar T>
T identity_prob(int n, const Bias& bias) {
  require_deck_size(n);
  return pow_int(bias.as<T>(), static_cast<std::uint64_t>(n - 1));
}

inline double identity_prob(const PhaseTransitionParams& params) {
  require_deck_size(params.n);
  params.p();  // validates
  return std::exp(static_cast<double>(params.n - 1) * std::log1p(-params.q()));
}

/// Law of Z_n = n - X_n.
template <Scalar T>
std::vector<T> deficit_law(const Pmf<T>& law) {
  std::vector<T> z(law.probs.rbegin(), law.probs.rend());
  return z;
}

}  // namespace shelfguess
