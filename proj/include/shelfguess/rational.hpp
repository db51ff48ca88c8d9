#pragma once

// Exact rational scalar and the bias parameter shared by every module.

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace shelfguess {

using Rational = mpq_class;
using Integer = mpz_class;

enum class Backend { exact, floating };

inline std::string_view to_string(Backend b) {
  return b == Backend::exact ? "exact" : "float";
}

inline Backend parse_backend(std::string_view s) {
  if (s == "exact") return Backend::exact;
  if (s == "float") return Backend::floating;
  throw std::invalid_argument("unknown backend '" + std::string(s) + "'");
}

/// Scalar types the numeric code is instantiated for.
template <typename T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

/// base^e by repeated squaring; exact for Rational.
template <typename T>
T pow_int(T base, std::uint64_t e) {
  T result(1);
  while (e > 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return result;
}

inline Integer binomial(std::uint64_t n, std::uint64_t k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

/// Parses "a/b", an integer, or a finite decimal such as "0.3" or "2.5e-1".
/// Every such literal denotes an exact rational, so nothing is rounded.
/// a/b in lowest terms. mpq_class(a, b) does not canonicalise.
inline Rational frac(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  auto bad = [&] { return std::invalid_argument("not a rational or decimal: '" + s + "'"); };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
      throw bad();
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    try {
      std::size_t used = 0;
      exponent = std::stol(s.substr(e + 1), &used);
      if (used != s.size() - e - 1) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.erase(0, 1);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) throw bad();
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw bad();
    }
  }
  if (digits.empty()) throw bad();
  Integer num(digits, 10);
  if (negative) num = -num;
  long scale = exponent - frac_digits;
  if (std::labs(scale) > 100000) throw bad();
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  Rational q = scale >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  q.canonicalize();
  return q;
}

/// Shuffle bias: probability that a card is placed on top of the pile.
///
/// Holds the exact rational when one is known (parsed input, grid values)
/// and always a double view of the same number. Values like the tie point
/// p* are irrational and only exist as doubles.
class Bias {
 public:
  explicit Bias(const Rational& p) : exact_(p), value_(p.get_d()) {
    if (p <= 0 || p > 1) throw std::domain_error("bias p must lie in (0,1], got " + p.get_str());
  }
  explicit Bias(double p) : value_(p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("bias p must lie in (0,1]");
  }
  static Bias half() { return Bias(frac(1, 2)); }

  static Bias parse(std::string_view text) { return Bias(parse_rational(text)); }

  bool is_exact() const { return exact_.has_value(); }
  const Rational& exact() const {
    if (!exact_) throw std::invalid_argument("exact backend requires a rational p");
    return *exact_;
  }
  double value() const { return value_; }

  template <Scalar T>
  T as() const {
    if constexpr (std::same_as<T, Rational>) {
      return exact();
    } else {
      return value_;
    }
  }

  bool is_one() const { return exact_ ? *exact_ == 1 : value_ == 1.0; }
  bool below_half() const { return exact_ ? *exact_ < frac(1, 2) : value_ < 0.5; }

  std::string str() const {
    if (exact_) return exact_->get_str();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
  }

 private:
  std::optional<Rational> exact_;
  double value_;
};

}  // namespace shelfguess
