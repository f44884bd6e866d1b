#pragma once

// Term-wise operations on sequence representatives: eventual equality,
// dominance, standard part, natural extensions, reciprocals and integer parts.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infinikit/error.hpp"
#include "infinikit/rate_seq.hpp"

namespace infinikit::hyperseq {

enum class Truth { yes, no, undecidable };

constexpr std::string_view to_string(Truth t) noexcept {
  switch (t) {
    case Truth::yes: return "true";
    case Truth::no: return "false";
    case Truth::undecidable: return "undecidable";
  }
  return "undecidable";
}

enum class DominanceVerdict { less, greater, same_order, undecidable_without_ultrafilter };

constexpr std::string_view to_string(DominanceVerdict v) noexcept {
  switch (v) {
    case DominanceVerdict::less: return "less";
    case DominanceVerdict::greater: return "greater";
    case DominanceVerdict::same_order: return "same-order";
    case DominanceVerdict::undecidable_without_ultrafilter: return "undecidable-without-ultrafilter";
  }
  return "undecidable-without-ultrafilter";
}

inline RateSeq termwise_add(const RateSeq& a, const RateSeq& b) { return a + b; }
inline RateSeq termwise_mul(const RateSeq& a, const RateSeq& b) { return a * b; }

/// Leading monomial of |u_n| along even (parity 0) or odd (parity 1) indices.
struct ParityClass {
  bool zero = false;
  Rational power;
  int log_power = 0;
  Scalar magnitude;

  friend bool operator==(const ParityClass&, const ParityClass&) = default;
};

inline std::optional<ParityClass> parity_class(const RateSeq& a, int parity) {
  const Scalar sign(parity == 0 ? 1 : -1);
  struct Group {
    Scalar sum;
    bool has_atom = false;
  };
  std::map<std::pair<Rational, int>, Group, std::greater<>> groups;
  for (const auto& t : a.terms())
    groups[{t.power, t.log_power}].sum += t.alternating ? t.coefficient * sign : t.coefficient;
  for (const auto& [c, atom] : a.atoms()) {
    if (!atom->leading || atom->leading->zero) return std::nullopt;
    const LeadingClass& l = *atom->leading;
    const Scalar restricted = l.plain + l.alternating * sign;
    if (restricted.is_zero()) return std::nullopt;
    auto& g = groups[{l.power, l.log_power}];
    g.sum += c * restricted;
    g.has_atom = true;
  }
  for (const auto& [key, g] : groups) {
    if (!g.sum.is_zero()) return ParityClass{false, key.first, key.second, g.sum.abs()};
    if (g.has_atom) return std::nullopt;
  }
  return ParityClass{true, Rational(0), 0, Scalar(0)};
}

namespace detail {

inline DominanceVerdict compare_classes(const ParityClass& a, const ParityClass& b) {
  if (a.zero || b.zero) {
    if (a.zero && b.zero) return DominanceVerdict::same_order;
    return a.zero ? DominanceVerdict::less : DominanceVerdict::greater;
  }
  auto order = [](auto x, auto y) {
    if (x < y) return DominanceVerdict::less;
    if (y < x) return DominanceVerdict::greater;
    return DominanceVerdict::same_order;
  };
  if (a.power != b.power) return order(a.power, b.power);
  if (a.log_power != b.log_power) return order(a.log_power, b.log_power);
  return order(a.magnitude, b.magnitude);
}

}  // namespace detail

/// Compares the eventual size of |a| and |b| by (power of n, power of ln n,
/// |coefficient|). When the verdict differs between even and odd indices the
/// answer depends on which of the two index sets an ultrafilter contains.
inline DominanceVerdict dominance_compare(const RateSeq& a, const RateSeq& b) {
  std::optional<DominanceVerdict> verdict;
  for (int parity : {0, 1}) {
    auto ca = parity_class(a, parity);
    auto cb = parity_class(b, parity);
    if (!ca || !cb) return DominanceVerdict::undecidable_without_ultrafilter;
    const DominanceVerdict v = detail::compare_classes(*ca, *cb);
    if (verdict && *verdict != v) return DominanceVerdict::undecidable_without_ultrafilter;
    verdict = v;
  }
  return *verdict;
}

/// Agreement at all but finitely many indices.
inline Truth eventually_equal(const RateSeq& a, const RateSeq& b) {
  const RateSeq d = a.body() - b.body();
  if (d.body_is_zero()) return Truth::yes;
  for (int parity : {0, 1}) {
    auto c = parity_class(d, parity);
    if (c && !c->zero) return Truth::no;
  }
  return d.is_symbolic() ? Truth::no : Truth::undecidable;
}

/// The limit of the sequence; the index overrides play no part.
inline Scalar standard_part(const RateSeq& a) {
  const Limit l = a.limit();
  if (l.kind == LimitKind::finite) return l.value;
  if (l.kind == LimitKind::unknown) fail(ErrorKind::no_limit, "limit of '" + a.key() + "' is not certified");
  fail(ErrorKind::no_limit, "sequence '" + a.key() + "' has no finite limit (" + l.str() + ")");
}

/// x minus its standard part.
inline RateSeq infinitesimal_part(const RateSeq& x) {
  return x - RateSeq::constant(standard_part(x));
}

/// A host function admitted to natural extension. The catalogue members
/// carry asymptotic rules; `custom` ones are sampler-only.
struct Function {
  enum class Kind { identity, power, exp, ln, custom };
  Kind kind = Kind::identity;
  Rational exponent;
  std::string name;
  std::function<double(double)> host;

  static Function identity() { return {Kind::identity, 0, "id", [](double x) { return x; }}; }
  static Function power(const Rational& e) {
    const double ed = to_double(e);
    return {Kind::power, e, "pow", [ed](double x) { return std::pow(x, ed); }};
  }
  static Function sqrt() { return power(Rational(1, 2)); }
  static Function exp() { return {Kind::exp, 0, "exp", [](double x) { return std::exp(x); }}; }
  static Function ln() { return {Kind::ln, 0, "ln", [](double x) { return std::log(x); }}; }
  /// The name identifies the function: equal names must mean equal functions.
  static Function custom(std::string name, std::function<double(double)> f) {
    return {Kind::custom, 0, std::move(name), std::move(f)};
  }

  bool defined_at(double x) const {
    if (std::isnan(x)) return true;
    switch (kind) {
      case Kind::ln: return x > 0;
      case Kind::power: {
        if (exponent < 0 && x == 0) return false;
        if (!is_integer(exponent) && denominator(exponent) % 2 == 0 && x < 0) return false;
        return true;
      }
      case Kind::custom: return !(std::isfinite(x) && std::isnan(host(x)));
      default: return true;
    }
  }

  Scalar apply(const Scalar& x) const {
    switch (kind) {
      case Kind::identity: return x;
      case Kind::power: return rational_power(x, exponent);
      case Kind::exp:
        if (x.is_zero()) return Scalar(1);
        return Scalar(std::exp(x.to_double()));
      case Kind::ln:
        if (x == Scalar(1)) return Scalar(0);
        return Scalar(std::log(x.to_double()));
      case Kind::custom: return Scalar(host(x.to_double()));
    }
    return x;
  }

  std::string label() const {
    if (kind == Kind::power) return "pow[" + infinikit::to_string(exponent) + "]";
    return name;
  }
};

inline constexpr Index default_probe_horizon = 1'000'000;

namespace detail {

inline void check_domain(const Function& f, const RateSeq& a) {
  auto check = [&](Index n) {
    const double x = a(n);
    if (!f.defined_at(x))
      fail(ErrorKind::domain, f.label() + " undefined at the value " + std::to_string(x) +
                                  " sampled at index " + std::to_string(n));
  };
  for (const auto& [n, v] : a.prefix()) check(n);
  for (Index n = 1; n <= 256; ++n) check(n);
  for (Index n = 512; n <= default_probe_horizon; n *= 2) check(n);
}

inline RateSeq mapped_atom(const Function& f, const RateSeq& body,
                           std::optional<LeadingClass> leading, Limit limit) {
  auto atom = std::make_shared<Atom>();
  atom->key = f.label() + "(" + body.key() + ")";
  atom->sampler = [host = f.host, body](Index n) { return host(body.body_value(n)); };
  atom->leading = std::move(leading);
  atom->limit = limit;
  return RateSeq::from_atom(std::move(atom));
}

inline bool is_single_term(const RateSeq& a) { return a.is_symbolic() && a.terms().size() == 1; }

inline RateSeq extend_power(const Rational& e, const RateSeq& a) {
  if (a.body_is_zero()) {
    if (e > 0) return RateSeq::zero();
    fail(ErrorKind::domain, "non-positive power of the zero sequence");
  }
  if (is_integer(e) && a.is_symbolic()) {
    const long k = numerator(e).convert_to<long>();
    if (k >= 0) {
      RateSeq out = RateSeq::constant(Scalar(1));
      for (long i = 0; i < k; ++i) out = out * a;
      return out;
    }
    if (is_single_term(a)) {
      const Term& t = a.terms().front();
      return RateSeq::monomial(t.coefficient.pow(k), t.power * k, t.log_power * static_cast<int>(k),
                               t.alternating && (k % 2 != 0));
    }
  }
  if (is_single_term(a)) {
    const Term& t = a.terms().front();
    const Rational lp = Rational(t.log_power) * e;
    if (!t.alternating && t.coefficient.sign() > 0 && is_integer(lp))
      return RateSeq::monomial(rational_power(t.coefficient, e), t.power * e,
                               numerator(lp).convert_to<int>());
  }
  std::optional<LeadingClass> leading;
  if (auto r = a.rate(); r && !r->zero && r->alternating.is_zero() && r->plain.sign() > 0) {
    const Rational lp = Rational(r->log_power) * e;
    if (is_integer(lp)) {
      LeadingClass c;
      c.power = r->power * e;
      c.log_power = numerator(lp).convert_to<int>();
      c.plain = rational_power(r->plain, e);
      leading = c;
    }
  }
  Limit limit = Limit::unknown();
  if (leading) {
    limit = limit_of(*leading);
  } else {
    const Limit l = a.limit();
    if (l.is_finite() && l.value.sign() > 0) limit = Limit::finite(rational_power(l.value, e));
    else if (l.kind == LimitKind::plus_infinity)
      limit = e > 0 ? Limit::plus_infinity() : Limit::finite(Scalar(0));
  }
  return mapped_atom(Function::power(e), a, leading, limit);
}

inline RateSeq extend_exp(const RateSeq& a) {
  if (a.is_constant()) return RateSeq::constant(Function::exp().apply(a.constant_value()));
  const Limit l = a.limit();
  std::optional<LeadingClass> leading;
  Limit limit = Limit::unknown();
  if (l.is_finite()) {
    LeadingClass c;
    c.plain = Function::exp().apply(l.value);
    leading = c;
    limit = Limit::finite(c.plain);
  } else if (l.kind == LimitKind::minus_infinity) {
    limit = Limit::finite(Scalar(0));
  } else if (l.kind == LimitKind::plus_infinity) {
    limit = Limit::plus_infinity();
  }
  return mapped_atom(Function::exp(), a, leading, limit);
}

inline RateSeq extend_ln(const RateSeq& a) {
  if (is_single_term(a)) {
    const Term& t = a.terms().front();
    if (t.log_power == 0 && !t.alternating && t.coefficient.sign() > 0) {
      RateSeq out = RateSeq::constant(Function::ln().apply(t.coefficient));
      if (t.power != 0) out = out + RateSeq::monomial(Scalar(t.power), 0, 1);
      return out;
    }
  }
  std::optional<LeadingClass> leading;
  Limit limit = Limit::unknown();
  auto set_leading = [&](LeadingClass c) {
    leading = c;
    limit = limit_of(c);
  };
  if (auto r = a.rate(); r && !r->zero && r->alternating.is_zero() && r->plain.sign() > 0) {
    if (r->power != 0) {
      LeadingClass c;
      c.log_power = 1;
      c.plain = Scalar(r->power);
      set_leading(c);
    } else if (r->log_power == 0) {
      if (r->plain == Scalar(1)) {
        if (auto u = (a - RateSeq::constant(Scalar(1))).rate(); u && !u->zero) set_leading(*u);
        else limit = Limit::finite(Scalar(0));
      } else {
        LeadingClass c;
        c.plain = Function::ln().apply(r->plain);
        set_leading(c);
      }
    } else {
      limit = r->log_power > 0 ? Limit::plus_infinity() : Limit::minus_infinity();
    }
  } else {
    const Limit l = a.limit();
    if (l.is_finite() && l.value.sign() > 0) {
      if (l.value == Scalar(1)) {
        limit = Limit::finite(Scalar(0));
      } else {
        LeadingClass c;
        c.plain = Function::ln().apply(l.value);
        set_leading(c);
      }
    } else if (l.is_zero()) {
      limit = Limit::minus_infinity();
    } else if (l.kind == LimitKind::plus_infinity) {
      limit = Limit::plus_infinity();
    }
  }
  return mapped_atom(Function::ln(), a, leading, limit);
}

}  // namespace detail

/// Natural extension: u_n -> f(u_n) at every index.
inline RateSeq extend(const Function& f, const RateSeq& a) {
  detail::check_domain(f, a);
  if (f.kind == Function::Kind::identity) return a;
  RateSeq out;
  const RateSeq body = a.body();
  switch (f.kind) {
    case Function::Kind::power: out = detail::extend_power(f.exponent, body); break;
    case Function::Kind::exp: out = detail::extend_exp(body); break;
    case Function::Kind::ln: out = detail::extend_ln(body); break;
    default: out = detail::mapped_atom(f, body, std::nullopt, Limit::unknown()); break;
  }
  RateSeq::Prefix mapped;
  for (const auto& [n, v] : a.prefix()) mapped[n] = f.apply(v);
  return out.with_prefix(mapped);
}

struct Reciprocal {
  RateSeq sequence;
  /// Indices where the input vanished; they carry the sentinel value 0.
  std::vector<Index> skipped;
};

inline constexpr Index reciprocal_scan = 4096;

/// 1/e(n) at every index where e(n) != 0.
inline Reciprocal reciprocal(const RateSeq& e) {
  if (e.body_is_zero()) fail(ErrorKind::degenerate_input, "reciprocal of the zero sequence");
  const RateSeq body = e.body();
  RateSeq out;
  if (detail::is_single_term(body)) {
    const Term& t = body.terms().front();
    out = RateSeq::monomial(Scalar(1) / t.coefficient, -t.power, -t.log_power, t.alternating);
  } else {
    std::optional<LeadingClass> leading;
    if (auto r = body.rate(); r && !r->zero) {
      const Scalar even = r->plain + r->alternating;
      const Scalar odd = r->plain - r->alternating;
      if (!even.is_zero() && !odd.is_zero()) {
        LeadingClass c;
        c.power = -r->power;
        c.log_power = -r->log_power;
        const Scalar ie = Scalar(1) / even;
        const Scalar io = Scalar(1) / odd;
        c.plain = (ie + io) * Scalar(Rational(1, 2));
        c.alternating = (ie - io) * Scalar(Rational(1, 2));
        leading = c;
      }
    }
    Limit limit = Limit::unknown();
    if (leading) {
      limit = limit_of(*leading);
    } else {
      const Limit l = body.limit();
      if (l.is_finite() && !l.is_zero()) limit = Limit::finite(Scalar(1) / l.value);
      else if (l.kind == LimitKind::plus_infinity || l.kind == LimitKind::minus_infinity)
        limit = Limit::finite(Scalar(0));
      else
        fail(ErrorKind::degenerate_input, "reciprocal needs a certified nonzero class for '" +
                                              body.key() + "'");
    }
    out = detail::mapped_atom(Function::power(-1), body, leading, limit);
  }

  Reciprocal result;
  RateSeq::Prefix overrides;
  for (const auto& [n, v] : e.prefix()) {
    if (v.is_zero()) {
      overrides[n] = Scalar(0);
      result.skipped.push_back(n);
    } else {
      overrides[n] = Scalar(1) / v;
    }
  }
  const Index scan_end = std::max<Index>(reciprocal_scan, e.last_prefix_index() + reciprocal_scan);
  for (Index n = 1; n <= scan_end; ++n) {
    if (e.prefix().contains(n)) continue;
    if (e(n) == 0.0) {
      overrides[n] = Scalar(0);
      result.skipped.push_back(n);
    }
  }
  std::sort(result.skipped.begin(), result.skipped.end());
  result.sequence = out.with_prefix(overrides);
  return result;
}

/// Term-wise floor; the result is marked integer-valued.
inline RateSeq integer_part(const RateSeq& h) {
  RateSeq::Prefix floored;
  for (const auto& [n, v] : h.prefix()) {
    if (v.is_exact()) floored[n] = Scalar(Rational(floor(v.exact())));
    else floored[n] = Scalar(std::floor(v.to_double()));
  }
  const RateSeq body = h.body();
  const bool integral = body.is_symbolic() &&
                        std::all_of(body.terms().begin(), body.terms().end(), [](const Term& t) {
                          return t.coefficient.is_exact() && is_integer(t.coefficient.exact()) &&
                                 t.power >= 0 && is_integer(t.power) && t.log_power == 0;
                        });
  if (integral) return body.with_integer_values(true).with_prefix(floored);
  if (h.integer_valued()) return h.with_prefix(floored);

  auto atom = std::make_shared<Atom>();
  atom->key = "floor(" + body.key() + ")";
  atom->sampler = [body](Index n) { return std::floor(body.body_value(n)); };
  atom->integer_valued = true;
  const Limit l = body.limit();
  if (l.kind == LimitKind::plus_infinity || l.kind == LimitKind::minus_infinity) {
    atom->leading = body.rate();
    atom->limit = l;
  } else {
    atom->limit = Limit::unknown();
  }
  if (body.is_symbolic()) atom->floor_of = body.terms();
  return RateSeq::from_atom(std::move(atom)).with_prefix(floored);
}

}  // namespace infinikit::hyperseq
