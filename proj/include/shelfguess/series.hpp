#pragma once

// Power-series expansion in z of rational generating functions whose
// coefficients are polynomials in the marks v (luck or total) and w
// (certified). Used to cross-check the dynamic programme.

#include "exact_dist.hpp"
#include "rational.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace shelfguess {

/// Dense polynomial in two variables with rational coefficients;
/// coeff(a, b) multiplies v^a w^b.
class Poly2 {
 public:
  Poly2() = default;
  explicit Poly2(const Rational& constant) : dv_(0), dw_(0), c_{constant} {}

  static Poly2 v() { return monomial(Rational(1), 1, 0); }
  static Poly2 w() { return monomial(Rational(1), 0, 1); }
  static Poly2 monomial(const Rational& c, int a, int b) {
    Poly2 r;
    r.resize(a, b);
    r.at(a, b) = c;
    return r;
  }

  int degree_v() const { return dv_; }
  int degree_w() const { return dw_; }

  Rational coeff(int a, int b) const {
    if (a < 0 || b < 0 || a > dv_ || b > dw_) return Rational(0);
    return c_[idx(a, b)];
  }

  Rational evaluate(const Rational& v, const Rational& w) const {
    Rational total(0);
    for (int a = 0; a <= dv_; ++a)
      for (int b = 0; b <= dw_; ++b)
        if (coeff(a, b) != 0)
          total += coeff(a, b) * pow_int(v, static_cast<std::uint64_t>(a)) * pow_int(w, static_cast<std::uint64_t>(b));
    return total;
  }

  bool nonnegative() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& x) { return sgn(x) >= 0; });
  }

  Poly2& operator+=(const Poly2& o) {
    resize(std::max(dv_, o.dv_), std::max(dw_, o.dw_));
    for (int a = 0; a <= o.dv_; ++a)
      for (int b = 0; b <= o.dw_; ++b) at(a, b) += o.coeff(a, b);
    return trim();
  }
  Poly2& operator-=(const Poly2& o) { return *this += o * Rational(-1); }

  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator*(const Poly2& a, const Rational& s) {
    Poly2 r = a;
    for (auto& x : r.c_) x *= s;
    return r.trim();
  }
  friend Poly2 operator*(const Rational& s, const Poly2& a) { return a * s; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r;
    if (a.empty() || b.empty()) return r;
    r.resize(a.dv_ + b.dv_, a.dw_ + b.dw_);
    for (int i = 0; i <= a.dv_; ++i)
      for (int j = 0; j <= a.dw_; ++j) {
        const Rational& x = a.c_[a.idx(i, j)];
        if (x == 0) continue;
        for (int k = 0; k <= b.dv_; ++k)
          for (int l = 0; l <= b.dw_; ++l) {
            const Rational& y = b.c_[b.idx(k, l)];
            if (y != 0) r.at(i + k, j + l) += x * y;
          }
      }
    return r.trim();
  }

  friend bool operator==(const Poly2& a, const Poly2& b) {
    const int dv = std::max(a.dv_, b.dv_), dw = std::max(a.dw_, b.dw_);
    for (int i = 0; i <= dv; ++i)
      for (int j = 0; j <= dw; ++j)
        if (a.coeff(i, j) != b.coeff(i, j)) return false;
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (int a = 0; a <= dv_; ++a)
      for (int b = 0; b <= dw_; ++b) {
        const Rational x = coeff(a, b);
        if (x == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << x.get_str();
        if (a > 0) os << "*v" << (a > 1 ? "^" + std::to_string(a) : "");
        if (b > 0) os << "*w" << (b > 1 ? "^" + std::to_string(b) : "");
      }
    return first ? "0" : os.str();
  }

 private:
  bool empty() const { return dv_ < 0; }
  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(dw_ + 1) + static_cast<std::size_t>(b);
  }
  Rational& at(int a, int b) { return c_[idx(a, b)]; }
  void resize(int dv, int dw) {
    if (dv <= dv_ && dw <= dw_) return;
    std::vector<Rational> grown(static_cast<std::size_t>(dv + 1) * static_cast<std::size_t>(dw + 1), Rational(0));
    for (int a = 0; a <= dv_; ++a)
      for (int b = 0; b <= dw_; ++b)
        grown[static_cast<std::size_t>(a) * static_cast<std::size_t>(dw + 1) + static_cast<std::size_t>(b)] = c_[idx(a, b)];
    c_ = std::move(grown);
    dv_ = dv;
    dw_ = dw;
  }
  Poly2& trim() { return *this; }

  int dv_ = -1;
  int dw_ = -1;
  std::vector<Rational> c_;
};

/// sum_k num[k] z^k / sum_k den[k] z^k with den[0] a nonzero constant.
struct RationalGf {
  std::vector<Poly2> numerator;
  std::vector<Poly2> denominator;
};

/// Coefficients q_1..q_{n_max} of z^n. q_n = (N_n - sum_{k>=1} D_k q_{n-k}) / D_0.
inline std::vector<Poly2> expand(const RationalGf& gf, int n_max) {
  if (gf.denominator.empty() || gf.denominator[0].degree_v() != 0 || gf.denominator[0].degree_w() != 0 ||
      gf.denominator[0].coeff(0, 0) == 0)
    throw std::invalid_argument("denominator must start with a nonzero constant");
  const Rational inv_d0 = 1 / gf.denominator[0].coeff(0, 0);
  std::vector<Poly2> q(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    Poly2 acc = n < static_cast<int>(gf.numerator.size()) ? gf.numerator[static_cast<std::size_t>(n)] : Poly2(Rational(0));
    for (int k = 1; k < static_cast<int>(gf.denominator.size()) && k <= n; ++k)
      acc -= gf.denominator[static_cast<std::size_t>(k)] * q[static_cast<std::size_t>(n - k)];
    q[static_cast<std::size_t>(n)] = acc * inv_d0;
  }
  q.erase(q.begin());
  return q;
}

namespace gf {

inline Poly2 c(const Rational& x) { return Poly2(x); }

/// Symmetric total form 2zv(2+(1-v)z) / (4 - 4vz + (v^2-v)z^2).
inline RationalGf symmetric_total() {
  const Poly2 v = Poly2::v();
  return {{c(0), c(4) * v, c(2) * v * (c(1) - v)}, {c(4), c(-4) * v, v * v - v}};
}

/// Biased total form zv(1 + (v-1)(p-1)z) / (1 - zv - pv(v-1)(p-1)z^2).
inline RationalGf biased_total(const Rational& p) {
  const Poly2 v = Poly2::v();
  return {{c(0), v, (p - 1) * v * (v - c(1))}, {c(1), c(-1) * v, -p * (p - 1) * v * (v - c(1))}};
}

/// Symmetric refined form 2zw(2+(1-w)z) / (4 + w(v-1)z^2 - 2z(v+w)).
inline RationalGf symmetric_joint() {
  const Poly2 v = Poly2::v(), w = Poly2::w();
  return {{c(0), c(4) * w, c(2) * w * (c(1) - w)}, {c(4), c(-2) * (v + w), w * (v - c(1))}};
}

/// Biased refined form, v marking luck and w certified guesses:
/// zw(1 + (1-p)(1-w)z) / (1 - z(pv + (1-p)w) + p(1-p)w(v-1)z^2).
inline RationalGf biased_joint(const Rational& p) {
  const Poly2 v = Poly2::v(), w = Poly2::w();
  const Rational q = 1 - p;
  return {{c(0), w, q * w * (c(1) - w)}, {c(1), c(-1) * (p * v + q * w), p * q * w * (v - c(1))}};
}

/// The same biased refined form with the roles of v and w exchanged, which
/// is how it is sometimes printed. Kept to show that it does not reproduce
/// the (luck, certified) law.
inline RationalGf biased_joint_marks_swapped(const Rational& p) {
  const Poly2 v = Poly2::v(), w = Poly2::w();
  const Rational q = 1 - p;
  return {{c(0), v, q * v * (c(1) - v)}, {c(1), c(-1) * (q * v + p * w), p * q * v * (w - c(1))}};
}

/// Total form with a first-order z in the last denominator term,
/// 2zv(2+(1-v)z) / (4 - 4vz + (v^2-v)z).
inline RationalGf symmetric_total_linear_typo() {
  const Poly2 v = Poly2::v();
  return {{c(0), c(4) * v, c(2) * v * (c(1) - v)}, {c(4), c(-4) * v + v * v - v}};
}

}  // namespace gf

inline void require_gf_bias(const Bias& bias) {
  if (!bias.is_exact() || bias.below_half())
    throw std::domain_error("series expansion needs an exact p in [1/2, 1], got " + bias.str());
}

/// q_n(v) = E v^{X_n}, n = 1..n_max.
inline std::vector<Poly2> gf_series_total(int n_max, const Bias& bias) {
  require_gf_bias(bias);
  if (bias.exact() == frac(1, 2)) return expand(gf::symmetric_total(), n_max);
  return expand(gf::biased_total(bias.exact()), n_max);
}

/// q_n(v, w) = E v^{L_n} w^{C_n}, n = 1..n_max.
inline std::vector<Poly2> gf_series_joint(int n_max, const Bias& bias = Bias::half()) {
  require_gf_bias(bias);
  if (bias.exact() == frac(1, 2)) return expand(gf::symmetric_joint(), n_max);
  return expand(gf::biased_joint(bias.exact()), n_max);
}

inline Poly2 generating_polynomial(const Pmf<Rational>& law) {
  Poly2 r(Rational(0));
  for (int k = 0; k < static_cast<int>(law.probs.size()); ++k)
    if (law.probs[static_cast<std::size_t>(k)] != 0) r += Poly2::monomial(law.probs[static_cast<std::size_t>(k)], k, 0);
  return r;
}

inline Poly2 generating_polynomial(const JointPmf<Rational>& law) {
  Poly2 r(Rational(0));
  for (int l = 0; l <= law.n(); ++l)
    for (int c = 0; l + c <= law.n(); ++c)
      if (law(l, c) != 0) r += Poly2::monomial(law(l, c), l, c);
  return r;
}

}  // namespace shelfguess
