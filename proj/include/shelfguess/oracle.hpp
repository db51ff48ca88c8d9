#pragma once

// Ground truth by brute force: every placement sequence is enumerated with
// its exact weight p^(#top) (1-p)^(#bottom). Nothing here uses the
// first-card decomposition, so it can adjudicate the dynamic programme and
// the generating functions.

#include "exact_dist.hpp"
#include "rational.hpp"
#include "shuffle.hpp"
#include "strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace shelfguess {

class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultEnumerationCap = 20;

template <Scalar T>
bool probably_equal(const T& a, const T& b) {
  if constexpr (std::same_as<T, Rational>)
    return a == b;
  else
    return std::abs(a - b) <= 1e-12;
}

/// Visits (deck, weight) for all 2^(n-1) placement sequences.
template <Scalar T>
void for_each_deck(int n, const Bias& bias, const std::function<void(const ShuffledDeck&, const T&)>& visit,
                   int cap = kDefaultEnumerationCap) {
  require_deck_size(n);
  if (n > cap) throw resource_error("enumeration capped at n = " + std::to_string(cap) + ", asked for " + std::to_string(n));
  const T p = bias.as<T>();
  const T q = T(1) - p;
  std::vector<T> p_pow(static_cast<std::size_t>(n), T(1)), q_pow(static_cast<std::size_t>(n), T(1));
  for (std::size_t k = 1; k < p_pow.size(); ++k) {
    p_pow[k] = p_pow[k - 1] * p;
    q_pow[k] = q_pow[k - 1] * q;
  }
  const std::uint64_t count = std::uint64_t{1} << static_cast<unsigned>(n - 1);
  PlacementSequence flips(static_cast<std::size_t>(n - 1));
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    int tops = 0;
    for (int k = 0; k < n - 1; ++k) {
      flips[static_cast<std::size_t>(k)] = ((mask >> static_cast<unsigned>(k)) & 1U) != 0;
      tops += flips[static_cast<std::size_t>(k)] ? 1 : 0;
    }
    const T weight = p_pow[static_cast<std::size_t>(tops)] * q_pow[static_cast<std::size_t>(n - 1 - tops)];
    visit(deck_from_placements(n, flips), weight);
  }
}

template <Scalar T>
struct EnumerationResult {
  int n = 0;
  Bias p = Bias::half();
  std::uint64_t sequences = 0;
  JointPmf<T> joint;
  Pmf<T> total;
  PositionMatrix<T> positions{1};
  std::vector<T> first_card;
  T weight_sum{0};
  bool all_shelf_shaped = true;
  bool injective = true;
};

template <Scalar T>
EnumerationResult<T> enumerate_all(int n, const Bias& bias, TieBreak tie = TieBreak::smallest,
                                   int cap = kDefaultEnumerationCap) {
  EnumerationResult<T> r;
  r.n = n;
  r.p = bias;
  r.joint = JointPmf<T>(n, bias);
  r.total = Pmf<T>{n, bias, std::vector<T>(static_cast<std::size_t>(n) + 1, T(0))};
  r.positions = PositionMatrix<T>(n);
  r.first_card.assign(static_cast<std::size_t>(n), T(0));
  std::vector<std::vector<Label>> seen_orders;
  for_each_deck<T>(
      n, bias,
      [&](const ShuffledDeck& deck, const T& w) {
        ++r.sequences;
        r.weight_sum += w;
        r.all_shelf_shaped = r.all_shelf_shaped && deck.has_shelf_shape();
        if (n <= 12) seen_orders.push_back(deck.order());
        for (int j = 1; j <= n; ++j) r.positions(deck.at(j), j) += w;
        r.first_card[static_cast<std::size_t>(deck.at(1) - 1)] += w;
        const Totals t = play_totals(deck, bias, tie);
        r.joint(t.luck, t.certified) += w;
        r.total.probs[static_cast<std::size_t>(t.correct)] += w;
      },
      cap);
  if (n <= 12) {
    std::sort(seen_orders.begin(), seen_orders.end());
    r.injective = std::adjacent_find(seen_orders.begin(), seen_orders.end()) == seen_orders.end();
  }
  return r;
}

/// Next-card law given the shown prefix, by two routes.
template <Scalar T>
struct ConditionalLaw {
  std::vector<T> enumerated;   // entry c-1 = P{next = c | prefix}
  std::vector<T> closed_form;  // same, from the guesser's reduced instance
  bool agree = false;
};

template <Scalar T>
ConditionalLaw<T> conditional_next_card(int n, const Bias& bias, const std::vector<Label>& prefix,
                                        int cap = kDefaultEnumerationCap) {
  if (static_cast<int>(prefix.size()) >= n) throw std::invalid_argument("prefix leaves no card to draw");
  ConditionalLaw<T> out;
  out.enumerated.assign(static_cast<std::size_t>(n), T(0));
  T mass(0);
  const std::size_t len = prefix.size();
  for_each_deck<T>(
      n, bias,
      [&](const ShuffledDeck& deck, const T& w) {
        if (w == 0) return;
        for (std::size_t k = 0; k < len; ++k)
          if (deck.order()[k] != prefix[k]) return;
        out.enumerated[static_cast<std::size_t>(deck.order()[len] - 1)] += w;
        mass += w;
      },
      cap);
  if (mass == 0) throw std::invalid_argument("prefix is impossible after a shelf shuffle");
  for (auto& x : out.enumerated) x /= mass;

  GuesserState state(n, bias);
  for (Label c : prefix) state.observe(c, state.next_guess());
  out.closed_form = state.template next_card_law<T>();
  out.agree = true;
  for (std::size_t c = 0; c < out.enumerated.size(); ++c)
    out.agree = out.agree && probably_equal(out.enumerated[c], out.closed_form[c]);
  return out;
}

template <Scalar T>
struct OptimalityReport {
  int n = 0;
  Bias p = Bias::half();
  std::size_t prefixes_checked = 0;
  std::size_t tie_prefixes = 0;           // argmax not unique
  std::vector<Label> root_argmax;         // maximisers at the empty prefix
  T expected_score{0};                    // E X_n of the strategy, by enumeration
  T sum_stepwise_max{0};                  // sum over prefixes of P(prefix) * max_c P(c | prefix)
  std::vector<std::string> failures;

  bool passed() const { return failures.empty() && probably_equal(expected_score, sum_stepwise_max); }

  std::string summary() const {
    std::ostringstream os;
    os << "n=" << n << " p=" << p.str() << " prefixes=" << prefixes_checked << " ties=" << tie_prefixes
       << " E[X]=" << to_string_any(expected_score) << " sum_of_stepwise_max=" << to_string_any(sum_stepwise_max)
       << (passed() ? " PASS" : " FAIL");
    for (const auto& f : failures) os << "\n  " << f;
    return os.str();
  }

  static std::string to_string_any(const T& x) {
    if constexpr (std::same_as<T, Rational>) {
      return x.get_str();
    } else {
      std::ostringstream s;
      s.precision(15);
      s << x;
      return s.str();
    }
  }
};

/// Checks, on every reachable prefix, that the strategy's guess maximises the
/// conditional law of the next card and that a guess is certified exactly
/// when that law is degenerate. Because the card is shown whatever the
/// guess, stepwise maximisation is globally optimal; the report also
/// confirms E X_n equals the sum of the stepwise maxima.
template <Scalar T>
OptimalityReport<T> verify_strategy_optimality(int n, const Bias& bias, TieBreak tie = TieBreak::smallest) {
  if (n > 9) throw resource_error("optimality verification is limited to n <= 9");
  OptimalityReport<T> rep;
  rep.n = n;
  rep.p = bias;

  struct Weighted {
    ShuffledDeck deck;
    T weight;
  };
  std::vector<Weighted> decks;
  for_each_deck<T>(n, bias, [&](const ShuffledDeck& d, const T& w) {
    if (w != 0) decks.push_back({d, w});
  });
  for (const auto& d : decks) rep.expected_score += T(play_totals(d.deck, bias, tie).correct) * d.weight;

  std::function<void(const std::vector<std::size_t>&, std::size_t, const GuesserState&)> walk;
  walk = [&](const std::vector<std::size_t>& members, std::size_t depth, const GuesserState& state) {
    if (depth == static_cast<std::size_t>(n)) return;
    ++rep.prefixes_checked;
    T mass(0);
    std::vector<T> law(static_cast<std::size_t>(n), T(0));
    for (std::size_t i : members) {
      mass += decks[i].weight;
      law[static_cast<std::size_t>(decks[i].deck.order()[depth] - 1)] += decks[i].weight;
    }
    T best(0);
    for (auto& x : law) {
      x /= mass;
      if (x > best) best = x;
    }
    std::vector<Label> maximisers;
    for (std::size_t c = 0; c < law.size(); ++c)
      if (probably_equal(law[c], best)) maximisers.push_back(static_cast<Label>(c + 1));
    if (maximisers.size() > 1) ++rep.tie_prefixes;
    if (depth == 0) rep.root_argmax = maximisers;

    std::vector<Label> prefix(decks[members.front()].deck.order().begin(),
                              decks[members.front()].deck.order().begin() + static_cast<std::ptrdiff_t>(depth));
    auto describe = [&] {
      std::ostringstream os;
      os << "prefix [";
      for (std::size_t k = 0; k < prefix.size(); ++k) os << (k ? "," : "") << prefix[k];
      os << "]";
      return os.str();
    };

    const Label guess = state.next_guess();
    if (!probably_equal(law[static_cast<std::size_t>(guess - 1)], best))
      rep.failures.push_back(describe() + ": guess " + std::to_string(guess) + " is not a maximiser");
    const bool degenerate = probably_equal(best, T(1));
    if (degenerate != state.next_card_certain())
      rep.failures.push_back(describe() + ": certification disagrees with the conditional law");
    const auto closed = state.template next_card_law<T>();
    for (std::size_t c = 0; c < law.size(); ++c)
      if (!probably_equal(law[c], closed[c])) {
        rep.failures.push_back(describe() + ": closed-form next-card law differs at label " + std::to_string(c + 1));
        break;
      }

    T prefix_weight(0);
    for (std::size_t i : members) prefix_weight += decks[i].weight;
    rep.sum_stepwise_max += prefix_weight * best;

    // Children grouped by the next shown label.
    std::vector<std::vector<std::size_t>> children(static_cast<std::size_t>(n));
    for (std::size_t i : members)
      children[static_cast<std::size_t>(decks[i].deck.order()[depth] - 1)].push_back(i);
    for (std::size_t c = 0; c < children.size(); ++c) {
      if (children[c].empty()) continue;
      GuesserState next = state;
      next.observe(static_cast<Label>(c + 1), guess);
      walk(children[c], depth + 1, next);
    }
  };
  std::vector<std::size_t> all(decks.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  walk(all, 0, GuesserState(n, bias, tie));
  return rep;
}

}  // namespace shelfguess
