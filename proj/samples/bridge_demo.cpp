// From a diagonal compact operator to filter verdicts on H = floor(1/eps).

#include <iostream>
#include <vector>

#include "infinikit/bridge.hpp"

int main() {
  using namespace infinikit;
  using hyperseq::Predicate;
  using hyperseq::RateSeq;

  const std::vector<double> prefix{1, 0.5, 1.0 / 3, 0.25};
  const auto t = opcalc::conjugate(opcalc::diag_embed(prefix), opcalc::random_orthogonal(prefix.size(), 11));
  const std::vector<Predicate> predicates{Predicate::greater_than(10), Predicate::evens(), Predicate::squares()};

  for (const Rational alpha : {Rational(1), Rational(2)}) {
    const auto report = bridge::run_bridge(t, RateSeq::monomial(Scalar(1), -alpha), predicates);
    std::cout << "eps = " << report.robinson.key() << ", H = " << report.H_int.key() << "\n";
    for (const auto& q : report.queries)
      std::cout << "  " << q.predicate << ": " << hyperseq::to_string(q.verdict) << "\n";
    std::cout << "  enclosure: [" << to_string(report.enclosure.lower) << ", " << to_string(report.enclosure.upper)
              << "]\n";
  }
  return 0;
}
