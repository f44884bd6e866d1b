#pragma once

// mu_n = c_k / n on blocks n in (2^(2^k), 2^(2^(k+1))], with c_k = 1 for even
// k and 2 for odd k (n <= 2 counts as block 0). Not measurable: gamma_N
// keeps oscillating between the two coefficients.

#include <cmath>
#include <cstdint>

#include "infinikit/opcalc.hpp"

namespace infinikit::testing {

inline double tower_coefficient(std::uint64_t n) {
  // Block k holds n with 2^k < log2(n) <= 2^(k+1).
  int k = 0;
  if (n > 2) {
    const int bits = 64 - __builtin_clzll(n - 1);  // ceil(log2 n)
    while ((1 << (k + 1)) < bits) ++k;
  }
  return k % 2 == 0 ? 1.0 : 2.0;
}

inline hyperseq::RateSeq tower_tail() {
  return hyperseq::RateSeq::opaque(
      "tower", [](std::uint64_t n) { return tower_coefficient(n) / static_cast<double>(n); }, std::nullopt,
      hyperseq::Limit::finite(Scalar(0)));
}

inline opcalc::SpectralSequence tower_sequence() {
  return opcalc::SpectralSequence(std::vector<double>{}, tower_tail());
}

}  // namespace infinikit::testing
