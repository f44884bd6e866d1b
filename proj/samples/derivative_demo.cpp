// Derivative of x^3 - 2x at x0 = 1/2 as the standard part of a difference
// quotient with an infinitesimal step.

#include <iostream>

#include "infinikit/levi_civita.hpp"

int main() {
  using namespace infinikit;
  using lc::LCNumber;

  const lc::Polynomial f{{0, -2, 0, 1}};
  const LCNumber x0 = LCNumber(Rational(1, 2));
  const LCNumber h = LCNumber::eps();

  const LCNumber quotient = lc::divide(f(x0 + h) - f(x0), h);
  std::cout << "quotient:   " << lc::to_string(quotient) << "\n";
  std::cout << "derivative: " << to_string(lc::standard_part(quotient)) << "\n";
  std::cout << "continuous: " << std::boolalpha << lc::continuity_check(f, Rational(1, 2), h) << "\n";
  return 0;
}
