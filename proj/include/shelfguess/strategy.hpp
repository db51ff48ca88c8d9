#pragma once

// Optimal full-feedback guessing after one shelf shuffle, and the
// luck/certified split of the correct guesses.

#include "rational.hpp"
#include "shuffle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shelfguess {

/// Which label to guess when both candidates are equally likely.
enum class TieBreak { smallest, largest };

enum class GuessClass { luck, certified, incorrect };

inline std::string_view to_string(GuessClass g) {
  switch (g) {
    case GuessClass::luck: return "luck";
    case GuessClass::certified: return "certified";
    case GuessClass::incorrect: return "incorrect";
  }
  return "?";
}

/// Largest instance size m for which the biased (p < 1/2) first guess is the
/// top label, i.e. the largest m with (1-p)^(m-1) >= p.
inline int nu_threshold(const Bias& bias) {
  if (!bias.below_half()) throw std::domain_error("threshold only defined for p < 1/2, got p = " + bias.str());
  const double estimate = std::floor(std::log(bias.value()) / std::log1p(-bias.value())) + 1.0;
  if (!bias.is_exact()) return static_cast<int>(estimate);
  const Rational& p = bias.exact();
  const Rational q = 1 - p;
  // Exact correction of the floating estimate: want q^(k-1) >= p > q^k.
  long k = std::max(1L, static_cast<long>(estimate));
  while (k > 1 && pow_int(q, static_cast<std::uint64_t>(k - 1)) < p) --k;
  while (pow_int(q, static_cast<std::uint64_t>(k)) >= p) ++k;
  return static_cast<int>(k);
}

/// Sign of (1-p)^(m-1) - p: which of "top label" and "successor" is the more
/// likely next card in a fresh instance of m >= 2 cards. Doubles compare
/// with a 1e-12 relative tie band so that irrational tie points register.
inline int compare_top_vs_successor(int m, const Bias& bias) {
  if (bias.is_exact()) {
    const Rational& p = bias.exact();
    return cmp(pow_int(Rational(1 - p), static_cast<std::uint64_t>(m - 1)), p);
  }
  const double p = bias.value();
  const double diff = std::pow(1.0 - p, m - 1) - p;
  if (std::abs(diff) <= 1e-12 * p) return 0;
  return diff > 0 ? 1 : -1;
}

/// True when the optimal first guess of an m-card instance is its largest
/// label rather than its smallest.
inline bool first_guess_is_top(int m, const Bias& bias, TieBreak tie = TieBreak::smallest) {
  if (m < 2 || !bias.below_half()) return false;
  const int c = compare_top_vs_successor(m, bias);
  return c > 0 || (c == 0 && tie == TieBreak::largest);
}

/// Knowledge of the guesser after some prefix of the deck has been shown.
///
/// Before any label >= n-1 appears, the shown labels form an increasing run
/// and the undecided part of the deck is a fresh shuffle of the labels above
/// the last one shown (the reduced instance). Labels skipped over are known
/// to sit at the bottom and come out last.
class GuesserState {
 public:
  GuesserState(int n, Bias bias, TieBreak tie = TieBreak::smallest)
      : n_(n), bias_(std::move(bias)), tie_(tie), unseen_(static_cast<std::size_t>(n) + 1, true), remaining_(n),
        largest_unseen_(n) {
    require_deck_size(n);
    unseen_[0] = false;
    // first_guess_is_top is monotone in m, so find its last true value once.
    if (bias_.below_half()) {
      int lo = 1, hi = n_;
      while (lo < hi) {
        const int mid = lo + (hi - lo + 1) / 2;
        if (first_guess_is_top(mid, bias_, tie_))
          lo = mid;
        else
          hi = mid - 1;
      }
      top_limit_ = lo;
    }
  }

  int n() const { return n_; }
  const Bias& bias() const { return bias_; }
  TieBreak tie_break() const { return tie_; }
  int remaining() const { return remaining_; }
  bool descending() const { return descending_; }
  /// Labels offset+1..n form the reduced instance.
  int offset() const { return offset_; }
  Label last_shown() const { return last_shown_; }
  bool is_unseen(Label c) const { return c >= 1 && c <= n_ && unseen_[static_cast<std::size_t>(c)]; }

  std::vector<Label> unseen_labels() const {
    std::vector<Label> out;
    for (Label c = 1; c <= n_; ++c)
      if (unseen_[static_cast<std::size_t>(c)]) out.push_back(c);
    return out;
  }

  Label next_guess() const {
    if (remaining_ == 0) throw std::logic_error("no unseen cards left");
    if (descending_) return largest_unseen_;
    const int m = n_ - offset_;
    return m >= 2 && m <= top_limit_ ? n_ : offset_ + 1;
  }

  /// Law of the next shown card; entry c-1 is P{next = c}.
  template <Scalar T>
  std::vector<T> next_card_law() const {
    if (remaining_ == 0) throw std::logic_error("no unseen cards left");
    std::vector<T> law(static_cast<std::size_t>(n_), T(0));
    if (descending_) {
      law[static_cast<std::size_t>(largest_unseen_ - 1)] = T(1);
      return law;
    }
    const T p = bias_.as<T>();
    const T q = T(1) - p;
    T run(1);
    for (Label c = offset_ + 1; c <= n_ - 1; ++c) {
      law[static_cast<std::size_t>(c - 1)] = p * run;
      run *= q;
    }
    law[static_cast<std::size_t>(n_ - 1)] = run;
    return law;
  }

  /// True when the next card is known with certainty.
  bool next_card_certain() const { return descending_ || remaining_ == 1 || bias_.is_one(); }

  /// Reveals `shown` and classifies `guess` against it.
  GuessClass observe(Label shown, Label guess) {
    if (!is_unseen(shown)) throw std::logic_error("label " + std::to_string(shown) + " is not among the unseen cards");
    if (!descending_ && shown <= offset_)
      throw std::invalid_argument("label " + std::to_string(shown) + " cannot appear here after a shelf shuffle");
    const bool certain = next_card_certain();
    GuessClass cls = guess != shown ? GuessClass::incorrect : certain ? GuessClass::certified : GuessClass::luck;

    unseen_[static_cast<std::size_t>(shown)] = false;
    --remaining_;
    last_shown_ = shown;
    while (largest_unseen_ > 0 && !unseen_[static_cast<std::size_t>(largest_unseen_)]) --largest_unseen_;
    if (shown >= n_ - 1)
      descending_ = true;
    else if (!descending_)
      offset_ = shown;
    return cls;
  }

 private:
  int n_;
  Bias bias_;
  TieBreak tie_;
  std::vector<bool> unseen_;
  int remaining_;
  Label largest_unseen_;
  Label last_shown_ = 0;
  int offset_ = 0;
  bool descending_ = false;
  int top_limit_ = 0;  // instance sizes 2..top_limit_ open with the top label
};

struct Totals {
  int correct = 0;    // X
  int luck = 0;       // L
  int certified = 0;  // C

  void add(GuessClass g) {
    if (g == GuessClass::luck) ++luck;
    if (g == GuessClass::certified) ++certified;
    if (g != GuessClass::incorrect) ++correct;
  }
  friend bool operator==(const Totals&, const Totals&) = default;
};

struct GameRecord {
  ShuffledDeck deck;
  std::vector<Label> guesses;
  std::vector<Label> shown;
  std::vector<GuessClass> classes;
  Totals totals;
};

inline GameRecord play_game(const ShuffledDeck& deck, const Bias& bias, TieBreak tie = TieBreak::smallest) {
  GameRecord rec;
  rec.deck = deck;
  GuesserState state(deck.size(), bias, tie);
  for (Label shown : deck.order()) {
    const Label guess = state.next_guess();
    const GuessClass cls = state.observe(shown, guess);
    rec.guesses.push_back(guess);
    rec.shown.push_back(shown);
    rec.classes.push_back(cls);
    rec.totals.add(cls);
  }
  return rec;
}

/// Totals only; no trace is kept. Used by the simulation hot loop.
inline Totals play_totals(const ShuffledDeck& deck, const Bias& bias, TieBreak tie = TieBreak::smallest) {
  Totals t;
  GuesserState state(deck.size(), bias, tie);
  for (Label shown : deck.order()) t.add(state.observe(shown, state.next_guess()));
  return t;
}

}  // namespace shelfguess
