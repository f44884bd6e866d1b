#pragma once

// Hand-rolled random generators shared by the property tests.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "infinikit/levi_civita.hpp"

namespace infinikit::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long long integer(long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Rational rational(long long max_num = 9, long long max_den = 6) {
    const long long den = integer(1, max_den);
    return Rational(integer(-max_num, max_num), den);
  }
  Rational nonzero_rational(long long max_num = 9, long long max_den = 6) {
    Rational r = 0;
    while (r == 0) r = rational(max_num, max_den);
    return r;
  }

  /// Up to `max_terms` terms; exponents k/2 in [-1, 3].
  lc::LCNumber lc_number(int max_terms = 4) {
    std::vector<std::pair<Rational, Rational>> raw;
    const int terms = static_cast<int>(integer(0, max_terms));
    for (int i = 0; i < terms; ++i) raw.emplace_back(Rational(integer(-2, 6), 2), rational());
    return lc::LCNumber::make(raw);
  }
  lc::LCNumber nonzero_lc_number(int max_terms = 4) {
    lc::LCNumber x;
    while (x.is_zero()) x = lc_number(max_terms);
    return x;
  }

  lc::Polynomial polynomial(int max_degree) {
    lc::Polynomial p;
    const int degree = static_cast<int>(integer(0, max_degree));
    for (int k = 0; k <= degree; ++k) p.coefficients.push_back(rational(20, 9));
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace infinikit::testing
