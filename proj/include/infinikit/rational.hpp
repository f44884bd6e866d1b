#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "infinikit/error.hpp"

namespace infinikit {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline int sign(const Rational& r) { return r.sign(); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Integer floor_div(const Integer& num, const Integer& den) {
  Integer q = num / den;  // truncates toward zero
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

inline Integer floor(const Rational& r) { return floor_div(numerator(r), denominator(r)); }

inline Rational pow_int(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) fail(ErrorKind::division_by_zero, "zero raised to a negative power");
    return pow_int(Rational(1) / base, -exponent);
  }
  Rational result = 1;
  Rational b = base;
  auto e = static_cast<unsigned long>(exponent);
  while (e != 0) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e != 0) b *= b;
  }
  return result;
}

// Exact k-th root of a nonnegative integer, if there is one.
inline std::optional<Integer> exact_root(const Integer& value, unsigned k) {
  if (value < 0 || k == 0) return std::nullopt;
  if (value < 2 || k == 1) return value;
  double guess = std::pow(value.convert_to<double>(), 1.0 / k);
  Integer candidate(static_cast<long long>(std::llround(guess)));
  for (int delta = -2; delta <= 2; ++delta) {
    Integer c = candidate + delta;
    if (c < 0) continue;
    if (boost::multiprecision::pow(c, k) == value) return c;
  }
  return std::nullopt;
}

inline std::optional<Rational> exact_root(const Rational& value, unsigned k) {
  if (value < 0) {
    if (k % 2 == 0) return std::nullopt;
    auto r = exact_root(Rational(-value), k);
    if (!r) return std::nullopt;
    return Rational(-*r);
  }
  auto n = exact_root(numerator(value), k);
  auto d = exact_root(denominator(value), k);
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

inline std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Terminating decimal expansion when the denominator has only factors 2 and 5.
inline std::optional<std::string> to_decimal_string(const Rational& r) {
  if (is_integer(r)) return numerator(r).str();
  Integer den = denominator(r);
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1) return std::nullopt;
  const int digits = std::max(twos, fives);
  Integer scaled = abs(numerator(r)) * boost::multiprecision::pow(Integer(10), digits) /
                   denominator(r);
  std::string body = scaled.str();
  if (static_cast<int>(body.size()) <= digits) body.insert(0, digits + 1 - body.size(), '0');
  body.insert(body.size() - digits, ".");
  return (r < 0 ? "-" : "") + body;
}

// Accepts "p", "p/q", and terminating decimals "d.ddd", each with an optional sign.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&]() -> Rational {
    fail(ErrorKind::syntax, "malformed rational '" + std::string(text) + "'");
  };
  if (text.empty()) return bad();
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto digits_at = [&](std::size_t from) {
    std::size_t to = from;
    while (to < text.size() && text[to] >= '0' && text[to] <= '9') ++to;
    return to;
  };
  std::size_t int_end = digits_at(pos);
  if (int_end == pos) return bad();
  Rational value(Integer(std::string(text.substr(pos, int_end - pos))));
  if (int_end == text.size()) return negative ? Rational(-value) : value;
  if (text[int_end] == '/') {
    std::size_t den_end = digits_at(int_end + 1);
    if (den_end == int_end + 1 || den_end != text.size()) return bad();
    Integer den(std::string(text.substr(int_end + 1)));
    if (den == 0) fail(ErrorKind::division_by_zero, "zero denominator in '" + std::string(text) + "'");
    value /= Rational(den);
  } else if (text[int_end] == '.') {
    std::size_t frac_end = digits_at(int_end + 1);
    if (frac_end == int_end + 1 || frac_end != text.size()) return bad();
    auto frac = text.substr(int_end + 1);
    value += Rational(Integer(std::string(frac)),
                      boost::multiprecision::pow(Integer(10), static_cast<unsigned>(frac.size())));
  } else {
    return bad();
  }
  return negative ? Rational(-value) : value;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / boost::multiprecision::gcd(a, b) * b);
}

}  // namespace infinikit
