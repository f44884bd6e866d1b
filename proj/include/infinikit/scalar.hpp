#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>

#include "infinikit/rational.hpp"

namespace infinikit {

/// A real number held exactly as a rational when possible, otherwise as a
/// double. Arithmetic stays exact while both operands are exact.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational r) : value_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Scalar(long long r) : value_(Rational(r)) {}  // NOLINT(google-explicit-constructor)
  Scalar(int r) : value_(Rational(r)) {}        // NOLINT(google-explicit-constructor)
  explicit Scalar(double d) : value_(d) {}

  bool is_exact() const noexcept { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const { return std::get<Rational>(value_); }

  double to_double() const {
    if (is_exact()) return infinikit::to_double(exact());
    return std::get<double>(value_);
  }

  bool is_zero() const { return is_exact() ? exact() == 0 : std::get<double>(value_) == 0.0; }

  int sign() const {
    if (is_exact()) return exact().sign();
    const double d = std::get<double>(value_);
    return (d > 0) - (d < 0);
  }

  bool is_finite() const { return is_exact() || std::isfinite(std::get<double>(value_)); }

  friend Scalar operator-(const Scalar& a) {
    if (a.is_exact()) return Scalar(Rational(-a.exact()));
    return Scalar(-a.to_double());
  }
  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() + b.exact()));
    return Scalar(a.to_double() + b.to_double());
  }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return Scalar(Rational(a.exact() * b.exact()));
    return Scalar(a.to_double() * b.to_double());
  }
  friend Scalar operator/(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) {
      if (b.exact() == 0) fail(ErrorKind::division_by_zero, "division by zero");
      return Scalar(Rational(a.exact() / b.exact()));
    }
    return Scalar(a.to_double() / b.to_double());
  }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
    return a.to_double() == b.to_double();
  }
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
    if (a.is_exact() && b.is_exact()) {
      if (a.exact() < b.exact()) return std::partial_ordering::less;
      if (a.exact() > b.exact()) return std::partial_ordering::greater;
      return std::partial_ordering::equivalent;
    }
    return a.to_double() <=> b.to_double();
  }

  Scalar abs() const { return sign() < 0 ? -*this : *this; }

  Scalar pow(long exponent) const {
    if (is_exact()) return Scalar(pow_int(exact(), exponent));
    return Scalar(std::pow(to_double(), static_cast<double>(exponent)));
  }

  /// Canonical text: exact values as p/q, inexact ones with 17 digits.
  std::string str() const {
    if (is_exact()) return to_string(exact());
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", to_double());
    return buf;
  }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << x.str(); }

 private:
  std::variant<Rational, double> value_;
};

/// Exact x^p for rational p when the root is rational, else a double.
inline Scalar rational_power(const Scalar& x, const Rational& p) {
  if (is_integer(p)) return x.pow(numerator(p).convert_to<long>());
  if (x.is_exact()) {
    const auto den = denominator(p).convert_to<unsigned>();
    if (auto root = exact_root(x.exact(), den)) return Scalar(*root).pow(numerator(p).convert_to<long>());
  }
  return Scalar(std::pow(x.to_double(), to_double(p)));
}

}  // namespace infinikit
