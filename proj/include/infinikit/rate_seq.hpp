#pragma once

// Real sequences <u_n>, n >= 1, described symbolically: a finite sum of rate
// monomials c * n^p * (ln n)^q * ((-1)^n)?, plus opaque "atoms" that are
// known only through a sampler and an asymptotic summary, plus finitely many
// index overrides.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "infinikit/error.hpp"
#include "infinikit/rational.hpp"
#include "infinikit/scalar.hpp"

namespace infinikit::hyperseq {

using Index = std::uint64_t;

/// coefficient * n^power * (ln n)^log_power, times (-1)^n when alternating.
struct Term {
  Scalar coefficient;
  Rational power;
  int log_power = 0;
  bool alternating = false;

  friend bool operator==(const Term&, const Term&) = default;
};

namespace detail {

// Descending growth; within one growth class the plain term comes first.
inline bool term_key_less(const Term& a, const Term& b) {
  if (a.power != b.power) return a.power > b.power;
  if (a.log_power != b.log_power) return a.log_power > b.log_power;
  return !a.alternating && b.alternating;
}

inline bool same_key(const Term& a, const Term& b) {
  return a.power == b.power && a.log_power == b.log_power && a.alternating == b.alternating;
}

inline double parity_sign(Index n) { return (n % 2 == 0) ? 1.0 : -1.0; }

inline double sample_term(const Term& t, Index n) {
  const double x = static_cast<double>(n);
  double v = t.coefficient.to_double();
  if (t.power != 0) v *= std::pow(x, to_double(t.power));
  if (t.log_power != 0) v *= std::pow(std::log(x), t.log_power);
  if (t.alternating) v *= parity_sign(n);
  return v;
}

inline Scalar sample_term_exact(const Term& t, Index n) {
  Scalar v = t.coefficient;
  if (t.power != 0) v = v * rational_power(Scalar(Rational(n)), t.power);
  if (t.log_power != 0) {
    if (n == 1 && t.log_power > 0) return Scalar(0);
    v = v * Scalar(std::pow(std::log(static_cast<double>(n)), t.log_power));
  }
  if (t.alternating && n % 2 == 1) v = -v;
  return v;
}

inline std::string format_exponent(const Rational& e) {
  if (is_integer(e)) return infinikit::to_string(e);
  return "(" + infinikit::to_string(e) + ")";
}

inline std::string term_string(const Term& t) {
  std::string out = t.coefficient.str();
  if (t.power != 0) out += "*n^" + format_exponent(t.power);
  if (t.log_power != 0) out += "*ln(n)^" + std::to_string(t.log_power);
  if (t.alternating) out += "*(-1)^n";
  return out;
}

}  // namespace detail

/// Leading behaviour (plain + alternating * (-1)^n) * n^power * (ln n)^log_power.
struct LeadingClass {
  bool zero = false;
  Rational power;
  int log_power = 0;
  Scalar plain;
  Scalar alternating;

  static LeadingClass zero_class() {
    LeadingClass c;
    c.zero = true;
    return c;
  }

  /// Comparison of the growth n^p (ln n)^q against n^0.
  int growth_sign() const {
    if (zero) return -1;
    if (power != 0) return power.sign();
    return (log_power > 0) - (log_power < 0);
  }

  friend LeadingClass operator*(const LeadingClass& a, const LeadingClass& b) {
    if (a.zero || b.zero) return zero_class();
    LeadingClass c;
    c.power = a.power + b.power;
    c.log_power = a.log_power + b.log_power;
    c.plain = a.plain * b.plain + a.alternating * b.alternating;
    c.alternating = a.plain * b.alternating + a.alternating * b.plain;
    return c;
  }

  std::string str() const {
    if (zero) return "0";
    std::string out;
    if (!plain.is_zero()) out += detail::term_string({plain, power, log_power, false});
    if (!alternating.is_zero()) {
      if (!out.empty()) out += " + ";
      out += detail::term_string({alternating, power, log_power, true});
    }
    return out;
  }
};

enum class LimitKind { finite, plus_infinity, minus_infinity, oscillating, unknown };

struct Limit {
  LimitKind kind = LimitKind::unknown;
  Scalar value;

  static Limit finite(Scalar v) { return {LimitKind::finite, std::move(v)}; }
  static Limit plus_infinity() { return {LimitKind::plus_infinity, Scalar()}; }
  static Limit minus_infinity() { return {LimitKind::minus_infinity, Scalar()}; }
  static Limit oscillating() { return {LimitKind::oscillating, Scalar()}; }
  static Limit unknown() { return {LimitKind::unknown, Scalar()}; }

  bool is_finite() const { return kind == LimitKind::finite; }
  bool is_zero() const { return is_finite() && value.is_zero(); }

  Limit scaled(const Scalar& c) const {
    if (kind == LimitKind::finite) return finite(value * c);
    if (c.sign() < 0) {
      if (kind == LimitKind::plus_infinity) return minus_infinity();
      if (kind == LimitKind::minus_infinity) return plus_infinity();
    }
    return *this;
  }

  friend Limit operator+(const Limit& a, const Limit& b) {
    if (a.kind == LimitKind::finite && b.kind == LimitKind::finite) return finite(a.value + b.value);
    if (a.kind == LimitKind::unknown || b.kind == LimitKind::unknown) return unknown();
    if (a.kind == LimitKind::oscillating || b.kind == LimitKind::oscillating) return unknown();
    if (a.kind == LimitKind::finite) return b;
    if (b.kind == LimitKind::finite) return a;
    return a.kind == b.kind ? a : unknown();
  }

  friend Limit operator*(const Limit& a, const Limit& b) {
    if (a.kind == LimitKind::finite && b.kind == LimitKind::finite) return finite(a.value * b.value);
    auto infinite = [](const Limit& l) {
      return l.kind == LimitKind::plus_infinity || l.kind == LimitKind::minus_infinity;
    };
    auto sgn = [](const Limit& l) {
      if (l.kind == LimitKind::plus_infinity) return 1;
      if (l.kind == LimitKind::minus_infinity) return -1;
      return l.value.sign();
    };
    if ((infinite(a) && (infinite(b) || (b.is_finite() && !b.is_zero()))) ||
        (infinite(b) && a.is_finite() && !a.is_zero()))
      return sgn(a) * sgn(b) > 0 ? plus_infinity() : minus_infinity();
    return unknown();
  }

  std::string str() const {
    switch (kind) {
      case LimitKind::finite: return value.str();
      case LimitKind::plus_infinity: return "+inf";
      case LimitKind::minus_infinity: return "-inf";
      case LimitKind::oscillating: return "oscillating";
      case LimitKind::unknown: return "unknown";
    }
    return "unknown";
  }
};

/// Limit implied by a known leading class.
inline Limit limit_of(const LeadingClass& c) {
  if (c.zero) return Limit::finite(Scalar(0));
  const int g = c.growth_sign();
  if (g < 0) return Limit::finite(Scalar(0));
  if (g == 0) return c.alternating.is_zero() ? Limit::finite(c.plain) : Limit::oscillating();
  if (c.alternating.abs() < c.plain.abs())
    return c.plain.sign() > 0 ? Limit::plus_infinity() : Limit::minus_infinity();
  return Limit::oscillating();
}

/// A sequence known through its sampler and an asymptotic summary. The key
/// is its identity: atoms with equal keys denote the same sequence.
struct Atom {
  std::string key;
  std::function<double(Index)> sampler;
  std::optional<LeadingClass> leading;
  Limit limit;
  bool integer_valued = false;
  // Set when the atom is floor(P(n)) for the exact expansion P.
  std::optional<std::vector<Term>> floor_of;
};
using AtomPtr = std::shared_ptr<const Atom>;

class RateSeq {
 public:
  using Prefix = std::map<Index, Scalar>;
  using AtomTerm = std::pair<Scalar, AtomPtr>;

  RateSeq() = default;

  static RateSeq zero() { return {}; }
  static RateSeq constant(const Scalar& c) { return monomial(c, 0); }
  static RateSeq monomial(const Scalar& c, const Rational& power, int log_power = 0,
                          bool alternating = false) {
    RateSeq s;
    if (!c.is_zero()) s.terms_.push_back({c, power, log_power, alternating});
    return s;
  }
  /// The sequence n.
  static RateSeq index() { return monomial(Scalar(1), 1); }
  static RateSeq log_index() { return monomial(Scalar(1), 0, 1); }
  static RateSeq parity() { return monomial(Scalar(1), 0, 0, true); }

  static RateSeq from_terms(std::vector<Term> terms) {
    RateSeq s;
    s.terms_ = normalize(std::move(terms));
    return s;
  }

  /// Sampler-only sequence with a caller-supplied asymptotic summary.
  static RateSeq opaque(std::string name, std::function<double(Index)> sampler,
                        std::optional<LeadingClass> leading, Limit limit,
                        bool integer_valued = false) {
    auto atom = std::make_shared<Atom>();
    atom->key = std::move(name);
    atom->sampler = std::move(sampler);
    atom->leading = std::move(leading);
    atom->limit = limit;
    atom->integer_valued = integer_valued;
    return from_atom(std::move(atom));
  }

  static RateSeq from_atom(AtomPtr atom) {
    RateSeq s;
    s.integer_valued_ = atom->integer_valued;
    s.atoms_.emplace_back(Scalar(1), std::move(atom));
    return s;
  }

  /// Returns a copy whose values at the given indices are overridden.
  RateSeq with_prefix(const Prefix& overrides) const {
    RateSeq s = *this;
    for (const auto& [n, v] : overrides) {
      if (n == 0) fail(ErrorKind::invalid_input, "sequence indices start at 1");
      s.prefix_[n] = v;
    }
    return s;
  }

  RateSeq with_integer_values(bool flag) const {
    RateSeq s = *this;
    s.integer_valued_ = flag;
    return s;
  }

  /// The same sequence without overrides.
  RateSeq body() const {
    RateSeq s = *this;
    s.prefix_.clear();
    return s;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  const std::vector<AtomTerm>& atoms() const noexcept { return atoms_; }
  const Prefix& prefix() const noexcept { return prefix_; }
  bool integer_valued() const noexcept { return integer_valued_; }
  bool is_symbolic() const noexcept { return atoms_.empty(); }
  bool body_is_zero() const noexcept { return terms_.empty() && atoms_.empty(); }
  Index last_prefix_index() const { return prefix_.empty() ? 0 : prefix_.rbegin()->first; }

  /// True for a body equal to a single constant (or zero).
  bool is_constant() const {
    return atoms_.empty() &&
           (terms_.empty() || (terms_.size() == 1 && terms_[0].power == 0 &&
                               terms_[0].log_power == 0 && !terms_[0].alternating));
  }
  Scalar constant_value() const { return terms_.empty() ? Scalar(0) : terms_[0].coefficient; }

  double operator()(Index n) const {
    if (auto it = prefix_.find(n); it != prefix_.end()) return it->second.to_double();
    return body_value(n);
  }

  double body_value(Index n) const {
    double v = 0.0;
    for (const auto& t : terms_) v += detail::sample_term(t, n);
    for (const auto& [c, a] : atoms_) v += c.to_double() * a->sampler(n);
    return v;
  }

  /// Exact where the coefficients and the powers of n allow it.
  Scalar sample(Index n) const {
    if (auto it = prefix_.find(n); it != prefix_.end()) return it->second;
    Scalar v(0);
    for (const auto& t : terms_) v += detail::sample_term_exact(t, n);
    for (const auto& [c, a] : atoms_) v += c * Scalar(a->sampler(n));
    return v;
  }

  /// Leading class of the body; empty when cancellation among atoms hides it.
  std::optional<LeadingClass> rate() const {
    struct Group {
      Scalar plain, alternating;
      bool has_atom = false;
    };
    std::map<std::pair<Rational, int>, Group, std::greater<>> groups;
    for (const auto& t : terms_) {
      auto& g = groups[{t.power, t.log_power}];
      (t.alternating ? g.alternating : g.plain) += t.coefficient;
    }
    for (const auto& [c, a] : atoms_) {
      if (!a->leading) return std::nullopt;
      if (a->leading->zero) return std::nullopt;
      auto& g = groups[{a->leading->power, a->leading->log_power}];
      g.plain += c * a->leading->plain;
      g.alternating += c * a->leading->alternating;
      g.has_atom = true;
    }
    if (groups.empty()) return LeadingClass::zero_class();
    const auto& [key, top] = *groups.begin();
    if (top.plain.is_zero() && top.alternating.is_zero()) return std::nullopt;
    LeadingClass c;
    c.power = key.first;
    c.log_power = key.second;
    c.plain = top.plain;
    c.alternating = top.alternating;
    return c;
  }

  Limit limit() const {
    if (auto r = rate()) return limit_of(*r);
    RateSeq symbolic_part = *this;
    symbolic_part.atoms_.clear();
    Limit l = limit_of(*symbolic_part.rate());
    for (const auto& [c, a] : atoms_) l = l + a->limit.scaled(c);
    return l;
  }

  /// Canonical body text; atom identity derives from it.
  std::string key() const {
    if (body_is_zero()) return "0";
    std::string out;
    for (const auto& t : terms_) {
      if (!out.empty()) out += " + ";
      out += detail::term_string(t);
    }
    for (const auto& [c, a] : atoms_) {
      if (!out.empty()) out += " + ";
      out += c.str() + "*[" + a->key + "]";
    }
    return out;
  }

  std::string str() const {
    std::string out = key();
    if (!prefix_.empty()) {
      out += " {";
      bool first = true;
      for (const auto& [n, v] : prefix_) {
        if (!first) out += ", ";
        out += std::to_string(n) + ":" + v.str();
        first = false;
      }
      out += "}";
    }
    return out;
  }

  friend RateSeq operator-(const RateSeq& a) { return a.scaled(Scalar(-1)); }

  friend RateSeq operator+(const RateSeq& a, const RateSeq& b) {
    RateSeq s;
    std::vector<Term> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    s.terms_ = normalize(std::move(terms));
    s.atoms_ = merge_atoms(a.atoms_, b.atoms_);
    s.integer_valued_ = a.integer_valued_ && b.integer_valued_;
    for (const auto& idx : union_indices(a, b)) s.prefix_[idx] = a.sample(idx) + b.sample(idx);
    return s;
  }

  friend RateSeq operator-(const RateSeq& a, const RateSeq& b) { return a + (-b); }

  friend RateSeq operator*(const RateSeq& a, const RateSeq& b) {
    RateSeq s;
    if (a.is_constant() && a.prefix_.empty()) return b.scaled(a.constant_value());
    if (b.is_constant() && b.prefix_.empty()) return a.scaled(b.constant_value());
    if (a.is_constant()) {
      s = b.body().scaled(a.constant_value());
    } else if (b.is_constant()) {
      s = a.body().scaled(b.constant_value());
    } else if (a.atoms_.empty() && b.atoms_.empty()) {
      std::vector<Term> terms;
      for (const auto& x : a.terms_)
        for (const auto& y : b.terms_)
          terms.push_back({x.coefficient * y.coefficient, x.power + y.power,
                           x.log_power + y.log_power, x.alternating != y.alternating});
      s.terms_ = normalize(std::move(terms));
    } else {
      s = product_atom(a.body(), b.body());
    }
    s.integer_valued_ = a.integer_valued_ && b.integer_valued_;
    for (const auto& idx : union_indices(a, b)) s.prefix_[idx] = a.sample(idx) * b.sample(idx);
    return s;
  }

  RateSeq scaled(const Scalar& c) const {
    if (c.is_zero()) {
      RateSeq z;
      for (const auto& [n, v] : prefix_) z.prefix_[n] = Scalar(0);
      return z;
    }
    RateSeq s = *this;
    for (auto& t : s.terms_) t.coefficient = t.coefficient * c;
    for (auto& [k, a] : s.atoms_) k = k * c;
    for (auto& [n, v] : s.prefix_) v = v * c;
    s.integer_valued_ = integer_valued_ && c.is_exact() && is_integer(c.exact());
    return s;
  }

  friend bool operator==(const RateSeq& a, const RateSeq& b) {
    if (a.str() != b.str()) return false;
    return a.integer_valued_ == b.integer_valued_;
  }

 private:
  static std::vector<Term> normalize(std::vector<Term> terms) {
    std::stable_sort(terms.begin(), terms.end(), detail::term_key_less);
    std::vector<Term> out;
    for (auto& t : terms) {
      if (!out.empty() && detail::same_key(out.back(), t)) {
        out.back().coefficient += t.coefficient;
      } else {
        out.push_back(std::move(t));
      }
    }
    std::erase_if(out, [](const Term& t) { return t.coefficient.is_zero(); });
    return out;
  }

  static std::vector<AtomTerm> merge_atoms(const std::vector<AtomTerm>& a,
                                           const std::vector<AtomTerm>& b) {
    std::map<std::string, AtomTerm> merged;
    for (const auto* side : {&a, &b})
      for (const auto& [c, atom] : *side) {
        auto [it, inserted] = merged.try_emplace(atom->key, c, atom);
        if (!inserted) it->second.first += c;
      }
    std::vector<AtomTerm> out;
    for (auto& [key, entry] : merged)
      if (!entry.first.is_zero()) out.push_back(std::move(entry));
    return out;
  }

  static std::vector<Index> union_indices(const RateSeq& a, const RateSeq& b) {
    std::vector<Index> out;
    for (const auto& [n, v] : a.prefix_) out.push_back(n);
    for (const auto& [n, v] : b.prefix_)
      if (!a.prefix_.contains(n)) out.push_back(n);
    return out;
  }

  static RateSeq product_atom(const RateSeq& a, const RateSeq& b) {
    auto atom = std::make_shared<Atom>();
    atom->key = "(" + a.key() + ")*(" + b.key() + ")";
    atom->sampler = [a, b](Index n) { return a.body_value(n) * b.body_value(n); };
    auto ra = a.rate();
    auto rb = b.rate();
    if (ra && rb) {
      LeadingClass c = *ra * *rb;
      if (c.zero || !c.plain.is_zero() || !c.alternating.is_zero()) atom->leading = c;
    }
    atom->limit = atom->leading ? limit_of(*atom->leading) : a.limit() * b.limit();
    return from_atom(std::move(atom));
  }

  std::vector<Term> terms_;
  std::vector<AtomTerm> atoms_;
  Prefix prefix_;
  bool integer_valued_ = false;
};

}  // namespace infinikit::hyperseq
