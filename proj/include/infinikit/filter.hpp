#pragma once

// Membership questions {n : H(n) in A} for a diverging integer-valued H, and
// the dyadic enclosure of a list of answers.

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "infinikit/error.hpp"
#include "infinikit/rate_seq.hpp"

namespace infinikit::hyperseq {

enum class FilterVerdict { in_filter, in_complement, undecided };

constexpr std::string_view to_string(FilterVerdict v) noexcept {
  switch (v) {
    case FilterVerdict::in_filter: return "in_filter";
    case FilterVerdict::in_complement: return "in_complement";
    case FilterVerdict::undecided: return "undecided";
  }
  return "undecided";
}

/// A decidable subset of the naturals from the registered catalogue.
class Predicate {
 public:
  enum class Kind { threshold, progression, perfect_power, finite_set, cofinite_set };

  /// {m : m > bound}
  static Predicate greater_than(Integer bound) { return {Kind::threshold, std::move(bound), 0, {}}; }
  /// {m : m = residue (mod modulus)}
  static Predicate progression(Integer modulus, Integer residue) {
    if (modulus < 1) fail(ErrorKind::invalid_input, "progression modulus must be positive");
    Integer r = residue % modulus;
    if (r < 0) r += modulus;
    return {Kind::progression, std::move(modulus), std::move(r), {}};
  }
  static Predicate evens() { return progression(2, 0); }
  static Predicate odds() { return progression(2, 1); }
  /// {j^k : j >= 0}
  static Predicate perfect_powers(unsigned k) {
    if (k < 2) fail(ErrorKind::invalid_input, "perfect power degree must be at least 2");
    return {Kind::perfect_power, Integer(k), 0, {}};
  }
  static Predicate squares() { return perfect_powers(2); }
  static Predicate finite_set(std::vector<Integer> members) {
    std::sort(members.begin(), members.end());
    return {Kind::finite_set, 0, 0, std::move(members)};
  }
  static Predicate cofinite_set(std::vector<Integer> excluded) {
    std::sort(excluded.begin(), excluded.end());
    return {Kind::cofinite_set, 0, 0, std::move(excluded)};
  }

  /// Parses one catalogue entry: gt:K, evens, odds, mod:M:R, squares, pow:K,
  /// finite:a|b|c, cofinite:a|b|c.
  static Predicate parse(std::string_view text) {
    auto field = [&](std::size_t from) { return std::string(text.substr(from)); };
    auto integers = [](const std::string& list) {
      std::vector<Integer> out;
      std::stringstream ss(list);
      std::string item;
      while (std::getline(ss, item, '|')) out.emplace_back(item);
      return out;
    };
    try {
      if (text == "evens") return evens();
      if (text == "odds") return odds();
      if (text == "squares") return squares();
      if (text.starts_with("gt:")) return greater_than(Integer(field(3)));
      if (text.starts_with("pow:")) return perfect_powers(std::stoul(field(4)));
      if (text.starts_with("mod:")) {
        const std::string rest = field(4);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) fail(ErrorKind::syntax, "mod predicate needs mod:M:R");
        return progression(Integer(rest.substr(0, colon)), Integer(rest.substr(colon + 1)));
      }
      if (text.starts_with("finite:")) return finite_set(integers(field(7)));
      if (text.starts_with("cofinite:")) return cofinite_set(integers(field(9)));
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorKind::syntax, "malformed predicate '" + std::string(text) + "'");
    }
    fail(ErrorKind::syntax, "unknown predicate '" + std::string(text) + "'");
  }

  Kind kind() const noexcept { return kind_; }
  /// Threshold bound, modulus, or power degree depending on the kind.
  const Integer& parameter() const noexcept { return a_; }
  const Integer& residue() const noexcept { return b_; }
  const std::vector<Integer>& members() const noexcept { return members_; }

  bool contains(const Integer& m) const {
    switch (kind_) {
      case Kind::threshold: return m > a_;
      case Kind::progression: {
        Integer r = m % a_;
        if (r < 0) r += a_;
        return r == b_;
      }
      case Kind::perfect_power: {
        if (m < 0) return false;
        return exact_root(m, a_.convert_to<unsigned>()).has_value();
      }
      case Kind::finite_set: return std::binary_search(members_.begin(), members_.end(), m);
      case Kind::cofinite_set: return !std::binary_search(members_.begin(), members_.end(), m);
    }
    return false;
  }

  std::string name() const {
    auto join = [](const std::vector<Integer>& v) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "|" : "") + v[i].str();
      return s;
    };
    switch (kind_) {
      case Kind::threshold: return "gt:" + a_.str();
      case Kind::progression:
        if (a_ == 2) return b_ == 0 ? "evens" : "odds";
        return "mod:" + a_.str() + ":" + b_.str();
      case Kind::perfect_power: return a_ == 2 ? "squares" : "pow:" + a_.str();
      case Kind::finite_set: return "finite:" + join(members_);
      case Kind::cofinite_set: return "cofinite:" + join(members_);
    }
    return "";
  }

 private:
  Predicate(Kind kind, Integer a, Integer b, std::vector<Integer> members)
      : kind_(kind), a_(std::move(a)), b_(std::move(b)), members_(std::move(members)) {}

  Kind kind_;
  Integer a_;
  Integer b_;
  std::vector<Integer> members_;
};

struct FilterOptions {
  Index horizon = 1'000'000;
};

namespace detail {

// floor(P(n)) with P an exact polynomial in n; the exact coefficients are
// listed constant term first.
struct PolynomialForm {
  std::vector<Rational> coefficients;

  Integer floor_at(Index n) const {
    Rational acc = 0;
    const Rational x(n);
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
    return floor(acc);
  }
  std::size_t degree() const { return coefficients.size() - 1; }
  const Rational& leading() const { return coefficients.back(); }
};

inline std::optional<PolynomialForm> polynomial_of(const std::vector<Term>& terms) {
  PolynomialForm p;
  for (const auto& t : terms) {
    if (!t.coefficient.is_exact() || t.log_power != 0 || t.alternating || t.power < 0 ||
        !is_integer(t.power))
      return std::nullopt;
    const auto d = numerator(t.power).convert_to<std::size_t>();
    if (d > 64) return std::nullopt;
    if (p.coefficients.size() <= d) p.coefficients.resize(d + 1, Rational(0));
    p.coefficients[d] = t.coefficient.exact();
  }
  if (p.coefficients.empty()) return std::nullopt;
  return p;
}

inline std::optional<PolynomialForm> polynomial_form(const RateSeq& h) {
  if (h.is_symbolic()) return polynomial_of(h.terms());
  if (h.terms().empty() && h.atoms().size() == 1 && h.atoms()[0].first == Scalar(1) &&
      h.atoms()[0].second->floor_of)
    return polynomial_of(*h.atoms()[0].second->floor_of);
  return std::nullopt;
}

// Every sufficiently large integer is a value of h: h is eventually
// nondecreasing with steps of at most one.
inline bool covers_tail(const RateSeq& h, const std::optional<PolynomialForm>& poly,
                        const FilterOptions& options) {
  bool slow = false;
  if (poly) {
    slow = poly->degree() == 1 && poly->leading() > 0 && poly->leading() <= 1;
  } else {
    std::optional<LeadingClass> c = h.rate();
    if (!c && h.terms().empty() && h.atoms().size() == 1) c = h.atoms()[0].second->leading;
    if (c && !c->zero && c->alternating.is_zero() && c->plain.sign() > 0) {
      slow = c->power < 1 || (c->power == 1 && c->log_power < 0) ||
             (c->power == 1 && c->log_power == 0 && c->plain < Scalar(1));
    }
  }
  if (!slow) return false;
  const Index hi = std::max<Index>(options.horizon, 4);
  const Index lo = std::max<Index>(hi / 2, h.last_prefix_index() + 1);
  double previous = h(lo);
  for (Index n = lo + 1; n <= hi; ++n) {
    const double v = h(n);
    const double step = v - previous;
    if (step != 0.0 && step != 1.0) return false;
    previous = v;
  }
  return true;
}

inline void factor(Integer c, std::vector<std::pair<Integer, unsigned>>& out) {
  for (Integer p = 2; p * p <= c; ++p) {
    unsigned e = 0;
    while (c % p == 0) {
      c /= p;
      ++e;
    }
    if (e != 0) out.emplace_back(p, e);
  }
  if (c > 1) out.emplace_back(c, 1);
}

}  // namespace detail

/// Classifies S = {n : H(n) in A} as cofinite (in_filter), finite
/// (in_complement), or infinite with infinite complement (undecided). Only
/// certified answers are returned; otherwise certification-failure is raised.
inline FilterVerdict filter_query(const RateSeq& h, const Predicate& a,
                                  const FilterOptions& options = {}) {
  if (!h.integer_valued())
    fail(ErrorKind::precondition, "filter_query needs an integer-valued sequence");
  if (h.limit().kind != LimitKind::plus_infinity)
    fail(ErrorKind::precondition, "filter_query needs a sequence diverging to +infinity");

  using Kind = Predicate::Kind;
  switch (a.kind()) {
    case Kind::threshold:
    case Kind::cofinite_set: return FilterVerdict::in_filter;
    case Kind::finite_set: return FilterVerdict::in_complement;
    default: break;
  }
  if (a.kind() == Kind::progression && a.parameter() == 1) return FilterVerdict::in_filter;

  const auto poly = detail::polynomial_form(h);
  const Index start = h.last_prefix_index() + 1;

  if (a.kind() == Kind::progression && poly) {
    // floor(Q(n)/D) mod k depends on n mod D*k for an integer polynomial Q.
    Integer den = 1;
    for (const auto& c : poly->coefficients) den = lcm(den, denominator(c));
    const Integer period = den * a.parameter();
    if (period > Integer(options.horizon))
      fail(ErrorKind::certification_failure,
           "residue period " + period.str() + " exceeds the sampling horizon");
    const auto steps = period.convert_to<Index>();
    Index hits = 0;
    for (Index n = start; n < start + steps; ++n)
      if (a.contains(poly->floor_at(n))) ++hits;
    if (hits == steps) return FilterVerdict::in_filter;
    if (hits == 0) return FilterVerdict::in_complement;
    return FilterVerdict::undecided;
  }

  if (a.kind() == Kind::perfect_power && poly && poly->degree() >= 1) {
    const auto nonzero = std::count_if(poly->coefficients.begin(), poly->coefficients.end(),
                                       [](const Rational& c) { return c != 0; });
    const Rational& c = poly->leading();
    if (nonzero == 1 && is_integer(c) && c > 0 && numerator(c) < Integer(1'000'000'000'000LL)) {
      // c * n^p is a k-th power for all n iff c is one and k | p; for some
      // (hence infinitely many) n iff gcd(p, k) divides every exponent of c.
      const unsigned k = a.parameter().convert_to<unsigned>();
      const auto p = static_cast<unsigned>(poly->degree());
      std::vector<std::pair<Integer, unsigned>> factors;
      detail::factor(numerator(c), factors);
      const bool c_is_power = std::all_of(factors.begin(), factors.end(),
                                          [&](const auto& f) { return f.second % k == 0; });
      if (c_is_power && p % k == 0) return FilterVerdict::in_filter;
      const unsigned g = std::gcd(p, k);
      const bool solvable = std::all_of(factors.begin(), factors.end(),
                                        [&](const auto& f) { return f.second % g == 0; });
      return solvable ? FilterVerdict::undecided : FilterVerdict::in_complement;
    }
  }

  if (detail::covers_tail(h, poly, options)) return FilterVerdict::undecided;

  fail(ErrorKind::certification_failure,
       "cannot certify {n : H(n) in " + a.name() + "} for H = " + h.key() +
           " within horizon " + std::to_string(options.horizon));
}

/// Closed dyadic interval [lower, upper] with upper - lower = 2^-decided_bits.
struct DyadicInterval {
  Rational lower;
  Rational upper;
  unsigned decided_bits = 0;

  Rational width() const { return upper - lower; }
  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
};

/// Binary digit k is 1 for in_filter and 0 for in_complement; the first
/// undecided answer leaves every later digit free.
inline DyadicInterval dyadic_embed(std::span<const FilterVerdict> answers) {
  DyadicInterval out;
  out.lower = 0;
  Rational scale(1, 2);
  for (const FilterVerdict v : answers) {
    if (v == FilterVerdict::undecided) break;
    if (v == FilterVerdict::in_filter) out.lower += scale;
    scale /= 2;
    ++out.decided_bits;
  }
  out.upper = out.lower + scale * 2;
  return out;
}

}  // namespace infinikit::hyperseq
