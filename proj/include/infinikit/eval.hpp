#pragma once

// Lowering of parsed expressions to LC numbers and to sequences.

#include <string>

#include "infinikit/error.hpp"
#include "infinikit/expr.hpp"
#include "infinikit/hyperseq.hpp"
#include "infinikit/levi_civita.hpp"

namespace infinikit::expr {

namespace detail {

[[noreturn]] inline void mismatch(const std::string& symbol, const char* mode) {
  fail(ErrorKind::mode_mismatch, "symbol '" + symbol + "' is not available in " + mode + " mode");
}

}  // namespace detail

inline lc::LCNumber eval_lc(const Expr& e, const Rational& cutoff = lc::default_cutoff) {
  using K = Expr::Kind;
  using lc::LCNumber;
  switch (e.kind) {
    case K::number: return LCNumber(e.value);
    case K::eps: return LCNumber::eps();
    case K::n: detail::mismatch("n", "lc");
    case K::parity: detail::mismatch("(-1)^n", "lc");
    case K::call: detail::mismatch(e.name, "lc");
    case K::neg: return -eval_lc(*e.args[0], cutoff);
    case K::add: return eval_lc(*e.args[0], cutoff) + eval_lc(*e.args[1], cutoff);
    case K::sub: return eval_lc(*e.args[0], cutoff) - eval_lc(*e.args[1], cutoff);
    case K::mul: return eval_lc(*e.args[0], cutoff) * eval_lc(*e.args[1], cutoff);
    case K::div: return lc::divide(eval_lc(*e.args[0], cutoff), eval_lc(*e.args[1], cutoff), cutoff);
    case K::pow: {
      const LCNumber base = eval_lc(*e.args[0], cutoff);
      if (is_integer(e.value)) return lc::pow(base, numerator(e.value).convert_to<long>(), cutoff);
      // Rational powers only of monomials with a rational root of the coefficient.
      if (!base.is_monomial())
        fail(ErrorKind::domain, "rational power " + to_string(e.value) + " of a non-monomial");
      const lc::Term& t = base.terms().front();
      const auto root = exact_root(t.coefficient, denominator(e.value).convert_to<unsigned>());
      if (!root) fail(ErrorKind::domain, "coefficient " + to_string(t.coefficient) + " has no rational root");
      return LCNumber::monomial(pow_int(*root, numerator(e.value).convert_to<long>()), t.exponent * e.value);
    }
  }
  fail(ErrorKind::invalid_input, "unknown expression node");
}

inline hyperseq::RateSeq eval_seq(const Expr& e) {
  using K = Expr::Kind;
  using hyperseq::Function;
  using hyperseq::RateSeq;
  switch (e.kind) {
    case K::number: return RateSeq::constant(Scalar(e.value));
    case K::eps: detail::mismatch("eps", "seq");
    case K::n: return RateSeq::index();
    case K::parity: return RateSeq::parity();
    case K::neg: return -eval_seq(*e.args[0]);
    case K::add: return eval_seq(*e.args[0]) + eval_seq(*e.args[1]);
    case K::sub: return eval_seq(*e.args[0]) - eval_seq(*e.args[1]);
    case K::mul: return eval_seq(*e.args[0]) * eval_seq(*e.args[1]);
    case K::div: {
      const RateSeq den = eval_seq(*e.args[1]);
      if (den.is_constant() && den.prefix().empty()) {
        if (den.constant_value().is_zero()) fail(ErrorKind::division_by_zero, "division by zero");
        return eval_seq(*e.args[0]).scaled(Scalar(1) / den.constant_value());
      }
      return eval_seq(*e.args[0]) * hyperseq::reciprocal(den).sequence;
    }
    case K::pow: return hyperseq::extend(Function::power(e.value), eval_seq(*e.args[0]));
    case K::call: {
      const RateSeq arg = eval_seq(*e.args[0]);
      if (e.name == "ln") return hyperseq::extend(Function::ln(), arg);
      if (e.name == "exp") return hyperseq::extend(Function::exp(), arg);
      if (e.name == "sqrt") return hyperseq::extend(Function::sqrt(), arg);
      if (e.name == "floor") return hyperseq::integer_part(arg);
      fail(ErrorKind::syntax, "unknown function '" + e.name + "'");
    }
  }
  fail(ErrorKind::invalid_input, "unknown expression node");
}

inline lc::LCNumber eval_lc(std::string_view text, const Rational& cutoff = lc::default_cutoff) {
  return eval_lc(*parse(text), cutoff);
}
inline hyperseq::RateSeq eval_seq(std::string_view text) { return eval_seq(*parse(text)); }

}  // namespace infinikit::expr
