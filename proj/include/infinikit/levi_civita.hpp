#pragma once

// Exact arithmetic with finite-support power series in one positive
// infinitesimal eps, exponents and coefficients both rational.

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infinikit/error.hpp"
#include "infinikit/rational.hpp"

namespace infinikit::lc {

inline constexpr int default_cutoff = 8;

struct Term {
  Rational exponent;
  Rational coefficient;

  friend bool operator==(const Term&, const Term&) = default;
};

enum class Classification { zero, infinitesimal, appreciable_finite, infinite };

constexpr std::string_view to_string(Classification c) noexcept {
  switch (c) {
    case Classification::zero: return "zero";
    case Classification::infinitesimal: return "infinitesimal";
    case Classification::appreciable_finite: return "appreciable-finite";
    case Classification::infinite: return "infinite";
  }
  return "zero";
}

/// A value sum(coefficient * eps^exponent) over finitely many terms.
///
/// Terms are kept with strictly increasing exponents and nonzero
/// coefficients, so equal values have identical term lists.
class LCNumber {
 public:
  LCNumber() = default;
  LCNumber(const Rational& constant) {  // NOLINT(google-explicit-constructor)
    if (constant != 0) terms_.push_back({Rational(0), constant});
  }
  LCNumber(long long constant) : LCNumber(Rational(constant)) {}  // NOLINT

  /// Duplicate exponents are summed and zero coefficients dropped.
  static LCNumber make(std::span<const std::pair<Rational, Rational>> raw) {
    std::map<Rational, Rational> merged;
    for (const auto& [e, c] : raw) merged[e] += c;
    LCNumber out;
    for (auto& [e, c] : merged)
      if (c != 0) out.terms_.push_back({e, c});
    return out;
  }
  static LCNumber make(std::initializer_list<std::pair<Rational, Rational>> raw) {
    return make(std::span<const std::pair<Rational, Rational>>(raw.begin(), raw.size()));
  }

  static LCNumber monomial(const Rational& coefficient, const Rational& exponent) {
    LCNumber out;
    if (coefficient != 0) out.terms_.push_back({exponent, coefficient});
    return out;
  }

  static LCNumber eps(const Rational& exponent = 1) { return monomial(1, exponent); }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }

  /// Smallest exponent; empty for zero.
  std::optional<Rational> valuation() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().exponent;
  }

  Rational coefficient(const Rational& exponent) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                               [](const Term& t, const Rational& e) { return t.exponent < e; });
    if (it != terms_.end() && it->exponent == exponent) return it->coefficient;
    return 0;
  }

  friend bool operator==(const LCNumber&, const LCNumber&) = default;

  friend LCNumber operator-(const LCNumber& a) {
    LCNumber out = a;
    for (auto& t : out.terms_) t.coefficient = -t.coefficient;
    return out;
  }

  friend LCNumber operator+(const LCNumber& a, const LCNumber& b) { return merge(a, b, false); }
  friend LCNumber operator-(const LCNumber& a, const LCNumber& b) { return merge(a, b, true); }

  friend LCNumber operator*(const LCNumber& a, const LCNumber& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::map<Rational, Rational> acc;
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) acc[x.exponent + y.exponent] += x.coefficient * y.coefficient;
    LCNumber out;
    out.terms_.reserve(acc.size());
    for (auto& [e, c] : acc)
      if (c != 0) out.terms_.push_back({e, std::move(c)});
    return out;
  }

  LCNumber& operator+=(const LCNumber& b) { return *this = *this + b; }
  LCNumber& operator-=(const LCNumber& b) { return *this = *this - b; }
  LCNumber& operator*=(const LCNumber& b) { return *this = *this * b; }

  /// Multiplies by eps^shift; exact.
  LCNumber shifted(const Rational& shift) const {
    LCNumber out = *this;
    for (auto& t : out.terms_) t.exponent += shift;
    return out;
  }

  LCNumber scaled(const Rational& factor) const {
    if (factor == 0) return {};
    LCNumber out = *this;
    for (auto& t : out.terms_) t.coefficient *= factor;
    return out;
  }

 private:
  static LCNumber merge(const LCNumber& a, const LCNumber& b, bool subtract) {
    LCNumber out;
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin();
    auto j = b.terms_.begin();
    auto push_b = [&](const Term& t) {
      out.terms_.push_back({t.exponent, subtract ? Rational(-t.coefficient) : t.coefficient});
    };
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->exponent < j->exponent)) {
        out.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->exponent < i->exponent) {
        push_b(*j++);
      } else {
        Rational c = subtract ? Rational(i->coefficient - j->coefficient)
                              : Rational(i->coefficient + j->coefficient);
        if (c != 0) out.terms_.push_back({i->exponent, std::move(c)});
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::vector<Term> terms_;
};

/// Series reciprocal. The result b satisfies: every exponent of a*b - 1
/// exceeds `cutoff`, and the leading term of b is the exact reciprocal of
/// the leading term of a.
inline LCNumber inv(const LCNumber& a, const Rational& cutoff = default_cutoff) {
  if (a.is_zero()) fail(ErrorKind::division_by_zero, "inverse of zero");
  const Term& lead = a.terms().front();
  if (a.is_monomial()) return LCNumber::monomial(Rational(1) / lead.coefficient, -lead.exponent);

  // a = lead * (1 + r), every exponent of r positive.
  std::vector<Term> r;
  for (auto it = std::next(a.terms().begin()); it != a.terms().end(); ++it)
    r.push_back({it->exponent - lead.exponent, it->coefficient / lead.coefficient});

  // Exponents of 1/(1+r) lie in the additive monoid spanned by those of r.
  std::set<Rational> support{Rational(0)};
  std::vector<Rational> frontier{Rational(0)};
  while (!frontier.empty()) {
    std::vector<Rational> next;
    for (const auto& e : frontier)
      for (const auto& t : r) {
        Rational s = e + t.exponent;
        if (s <= cutoff && support.insert(s).second) next.push_back(s);
      }
    frontier = std::move(next);
  }

  std::map<Rational, Rational> b;
  for (const auto& e : support) {
    if (e == 0) {
      b[e] = 1;
      continue;
    }
    Rational acc = 0;
    for (const auto& t : r) {
      if (t.exponent > e) break;
      auto it = b.find(e - t.exponent);
      if (it != b.end()) acc -= t.coefficient * it->second;
    }
    b[e] = acc;
  }

  std::vector<std::pair<Rational, Rational>> raw;
  raw.reserve(b.size());
  const Rational scale = Rational(1) / lead.coefficient;
  for (auto& [e, c] : b) raw.emplace_back(e - lead.exponent, c * scale);
  return LCNumber::make(raw);
}

inline LCNumber divide(const LCNumber& a, const LCNumber& b,
                       const Rational& cutoff = default_cutoff) {
  if (b.is_zero()) fail(ErrorKind::division_by_zero, "division by zero");
  if (b.is_monomial()) {
    const Term& t = b.terms().front();
    return a.shifted(-t.exponent).scaled(Rational(1) / t.coefficient);
  }
  return a * inv(b, cutoff);
}

/// Integer power; negative exponents go through `inv`.
inline LCNumber pow(const LCNumber& base, long exponent, const Rational& cutoff = default_cutoff) {
  if (exponent < 0) return pow(inv(base, cutoff), -exponent, cutoff);
  LCNumber result = Rational(1);
  LCNumber b = base;
  auto e = static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e != 0) b *= b;
  }
  return result;
}

/// Ordering of the field: the sign of the lowest-order coefficient of a - b.
inline std::strong_ordering compare(const LCNumber& a, const LCNumber& b) {
  auto i = a.terms().begin();
  auto j = b.terms().begin();
  while (i != a.terms().end() || j != b.terms().end()) {
    if (j == b.terms().end() || (i != a.terms().end() && i->exponent < j->exponent))
      return i->coefficient > 0 ? std::strong_ordering::greater : std::strong_ordering::less;
    if (i == a.terms().end() || j->exponent < i->exponent)
      return j->coefficient > 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    if (i->coefficient != j->coefficient)
      return i->coefficient > j->coefficient ? std::strong_ordering::greater
                                             : std::strong_ordering::less;
    ++i;
    ++j;
  }
  return std::strong_ordering::equal;
}

inline std::strong_ordering operator<=>(const LCNumber& a, const LCNumber& b) { return compare(a, b); }

constexpr std::string_view to_string(std::strong_ordering o) noexcept {
  if (o == std::strong_ordering::less) return "less";
  if (o == std::strong_ordering::greater) return "greater";
  return "equal";
}

inline Classification classify(const LCNumber& a) {
  if (a.is_zero()) return Classification::zero;
  const Rational& v = a.terms().front().exponent;
  if (v > 0) return Classification::infinitesimal;
  if (v < 0) return Classification::infinite;
  return Classification::appreciable_finite;
}

inline Rational standard_part(const LCNumber& a) {
  if (classify(a) == Classification::infinite)
    fail(ErrorKind::infinite_input, "infinite input has no standard part");
  return a.coefficient(0);
}

inline std::string format_exponent(const Rational& e) {
  if (is_integer(e)) return infinikit::to_string(e);
  return "(" + infinikit::to_string(e) + ")";
}

/// Canonical text in ascending exponent order, e.g. "3 + 1*eps^1".
inline std::string to_string(const LCNumber& a) {
  if (a.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : a.terms()) {
    const bool negative = t.coefficient < 0;
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    out += infinikit::to_string(Rational(abs(t.coefficient)));
    if (t.exponent != 0) out += "*eps^" + format_exponent(t.exponent);
    first = false;
  }
  return out;
}

/// Polynomial with rational coefficients, constant term first.
struct Polynomial {
  std::vector<Rational> coefficients;

  template <typename T>
  T operator()(const T& x) const {
    T acc = T(Rational(0));
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + T(*it);
    return acc;
  }

  Polynomial derivative() const {
    Polynomial d;
    for (std::size_t k = 1; k < coefficients.size(); ++k)
      d.coefficients.push_back(coefficients[k] * static_cast<long long>(k));
    return d;
  }
};

/// Differential quotient st((f(x0 + eps) - f(x0)) / eps).
inline Rational derivative(const Polynomial& f, const Rational& x0) {
  const LCNumber at = LCNumber(x0) + LCNumber::eps();
  const LCNumber increment = f(at) - LCNumber(f(x0));
  return standard_part(increment.shifted(-1));
}

/// True when an infinitesimal change alpha of the argument changes f by an
/// infinitesimal (or zero) amount.
inline bool continuity_check(const Polynomial& f, const Rational& x0, const LCNumber& alpha) {
  if (classify(alpha) != Classification::infinitesimal)
    fail(ErrorKind::precondition, "continuity_check needs an infinitesimal increment");
  const Classification c = classify(f(LCNumber(x0) + alpha) - LCNumber(f(x0)));
  return c == Classification::zero || c == Classification::infinitesimal;
}

}  // namespace infinikit::lc
