#pragma once

// Single-shelf shuffle: deck construction, sampling, position matrix and
// the law of the first card.
//
// Conventions: labels are 1..n, position 1 is the top of the finished pile
// and is the first card drawn in the guessing game. Cards leave the source
// deck bottom first, so card n starts the pile and every later card i
// (i = n-1 down to 1) goes on top with probability p.

#include "rational.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace shelfguess {

using Label = int;

/// One flip per card n-1, n-2, ..., 1 (in that order); true = top.
using PlacementSequence = std::vector<bool>;

class ShuffledDeck {
 public:
  ShuffledDeck() = default;

  /// Throws std::invalid_argument unless `order` is a permutation of 1..n.
  explicit ShuffledDeck(std::vector<Label> order) : order_(std::move(order)) {
    std::vector<bool> seen(order_.size() + 1, false);
    for (Label c : order_) {
      if (c < 1 || c > size() || seen[static_cast<std::size_t>(c)])
        throw std::invalid_argument("deck is not a permutation of 1..n");
      seen[static_cast<std::size_t>(c)] = true;
    }
  }

  static ShuffledDeck identity(int n) {
    std::vector<Label> order(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j + 1;
    return ShuffledDeck(std::move(order));
  }

  int size() const { return static_cast<int>(order_.size()); }
  /// Label at position j, 1-based from the top.
  Label at(int position) const { return order_.at(static_cast<std::size_t>(position - 1)); }
  const std::vector<Label>& order() const { return order_; }

  bool is_identity() const {
    for (int j = 0; j < size(); ++j)
      if (order_[static_cast<std::size_t>(j)] != j + 1) return false;
    return true;
  }

  /// True when the deck reads (increasing run, n, decreasing run) top to
  /// bottom, which is the shape every shelf shuffle produces.
  bool has_shelf_shape() const {
    const int n = size();
    int j = 0;
    while (j < n && order_[static_cast<std::size_t>(j)] != n) {
      if (j > 0 && order_[static_cast<std::size_t>(j)] < order_[static_cast<std::size_t>(j - 1)]) return false;
      ++j;
    }
    for (int k = j + 1; k < n; ++k)
      if (order_[static_cast<std::size_t>(k)] > order_[static_cast<std::size_t>(k - 1)]) return false;
    return j < n;
  }

  friend bool operator==(const ShuffledDeck&, const ShuffledDeck&) = default;

 private:
  std::vector<Label> order_;
};

inline void require_deck_size(int n) {
  if (n < 1) throw std::invalid_argument("deck size n must be >= 1, got " + std::to_string(n));
}

inline ShuffledDeck deck_from_placements(int n, const PlacementSequence& flips) {
  require_deck_size(n);
  if (flips.size() != static_cast<std::size_t>(n - 1))
    throw std::invalid_argument("placement sequence must have n-1 = " + std::to_string(n - 1) +
                                " flips, got " + std::to_string(flips.size()));
  // Top-placed cards arrive in decreasing label order, so the top part of the
  // pile reads increasing; bottom-placed cards read decreasing below card n.
  std::vector<Label> top, bottom;
  for (int i = n - 1; i >= 1; --i) {
    if (flips[static_cast<std::size_t>(n - 1 - i)])
      top.push_back(i);
    else
      bottom.push_back(i);
  }
  std::vector<Label> order(top.rbegin(), top.rend());
  order.push_back(n);
  order.insert(order.end(), bottom.begin(), bottom.end());
  return ShuffledDeck(std::move(order));
}

/// Inverse of deck_from_placements on shelf-shaped decks.
inline PlacementSequence placements_of(const ShuffledDeck& deck) {
  const int n = deck.size();
  PlacementSequence flips(static_cast<std::size_t>(n - 1), false);
  for (int j = 1; j <= n && deck.at(j) != n; ++j)
    flips[static_cast<std::size_t>(n - deck.at(j) - 1)] = true;
  return flips;
}

/// Uniform double in [0,1) from the top 53 bits of one 64-bit draw.
template <typename Engine>
double unit_interval(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Engine>
ShuffledDeck shelf_shuffle(int n, const Bias& p, Engine& rng) {
  require_deck_size(n);
  PlacementSequence flips(static_cast<std::size_t>(n - 1));
  const double top = p.value();
  for (auto&& f : flips) f = unit_interval(rng) < top;
  return deck_from_placements(n, flips);
}

/// Dense n x n matrix, 1-based accessors.
template <Scalar T>
class PositionMatrix {
 public:
  explicit PositionMatrix(int n) : n_(n), cells_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), T(0)) {}

  int size() const { return n_; }
  /// P{card i lands at position j}.
  T& operator()(int i, int j) { return cells_[index(i, j)]; }
  const T& operator()(int i, int j) const { return cells_[index(i, j)]; }

  T row_sum(int i) const {
    T s(0);
    for (int j = 1; j <= n_; ++j) s += (*this)(i, j);
    return s;
  }
  T column_sum(int j) const {
    T s(0);
    for (int i = 1; i <= n_; ++i) s += (*this)(i, j);
    return s;
  }

  friend bool operator==(const PositionMatrix&, const PositionMatrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j - 1);
  }
  int n_;
  std::vector<T> cells_;
};

namespace detail {

/// p^a (1-p)^b C(c, d), zero whenever the binomial vanishes or an exponent
/// would be negative (the two happen together).
template <Scalar T>
T placement_term(const T& p, const T& q, long a, long b, long c, long d) {
  if (d < 0 || d > c || a < 0 || b < 0) return T(0);
  T binom;
  if constexpr (std::same_as<T, Rational>) {
    binom = Rational(binomial(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(d)));
  } else {
    binom = binomial(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(d)).get_d();
  }
  return binom * pow_int(p, static_cast<std::uint64_t>(a)) * pow_int(q, static_cast<std::uint64_t>(b));
}

}  // namespace detail

template <Scalar T>
PositionMatrix<T> position_matrix(int n, const Bias& bias) {
  require_deck_size(n);
  const T p = bias.as<T>();
  const T q = T(1) - p;
  PositionMatrix<T> m(n);
  for (int i = 1; i <= n - 1; ++i) {
    for (int j = 1; j <= n; ++j) {
      // Card i on top with j-1 of the cards 1..i-1 above it, or on the
      // bottom with n-j of them below it.
      m(i, j) = detail::placement_term<T>(p, q, j, i - j, i - 1, j - 1) +
                detail::placement_term<T>(p, q, i - 1 - (n - j), n - j + 1, i - 1, n - j);
    }
  }
  for (int j = 1; j <= n; ++j) m(n, j) = detail::placement_term<T>(p, q, j - 1, n - j, n - 1, j - 1);
  return m;
}

/// probs[i-1] = P{the top card has label i}.
template <Scalar T>
std::vector<T> first_card_law(int n, const Bias& bias) {
  require_deck_size(n);
  const T p = bias.as<T>();
  const T q = T(1) - p;
  std::vector<T> probs(static_cast<std::size_t>(n));
  T run(1);  // (1-p)^{i-1}
  for (int i = 1; i <= n - 1; ++i) {
    probs[static_cast<std::size_t>(i - 1)] = p * run;
    run *= q;
  }
  probs[static_cast<std::size_t>(n - 1)] = run;
  return probs;
}

}  // namespace shelfguess
