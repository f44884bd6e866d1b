#pragma once

// Logarithmic means gamma_N = sigma_N / ln N of spectral sequences and the
// diagnostics built on them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infinikit/error.hpp"
#include "infinikit/opcalc.hpp"

namespace infinikit::dixmier {

using Index = std::uint64_t;
using opcalc::SpectralSequence;

/// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// sigma_N at each of the (ascending) points, in one pass.
inline std::vector<double> partial_sums(const SpectralSequence& s, std::span<const Index> points) {
  std::vector<double> out;
  out.reserve(points.size());
  if (points.empty()) return out;
  if (!std::is_sorted(points.begin(), points.end()))
    fail(ErrorKind::invalid_input, "partial_sums needs ascending indices");
  CompensatedSum acc;
  double previous = 0.0;
  Index n = 0;
  for (const Index target : points) {
    for (; n < target; ) {
      ++n;
      const double mu = s.at(n);
      if (!(mu >= 0.0)) fail(ErrorKind::invalid_input, "negative or NaN spectral value at index " + std::to_string(n));
      acc.add(mu);
    }
    const double sigma = acc.value();
    if (sigma < previous) fail(ErrorKind::invalid_input, "partial sums decreased");
    previous = sigma;
    out.push_back(sigma);
  }
  return out;
}

inline double partial_sum(const SpectralSequence& s, Index n) {
  const Index point[] = {n};
  return partial_sums(s, point).front();
}

inline double gamma(const SpectralSequence& s, Index n) {
  if (n < 2) fail(ErrorKind::precondition, "gamma_N needs N >= 2");
  return partial_sum(s, n) / std::log(static_cast<double>(n));
}

struct DixmierOptions {
  Index cap = Index{1} << 20;
  /// Verdict threshold on the spread, relative to max(1, |value|).
  double tolerance = 1e-3;
  /// Running (Cesaro) mean of the extrapolated values before the verdict.
  bool smoothing = true;
  /// The verdict window starts at j = ceil(fraction * J) of the schedule 2^1..2^J.
  double window_fraction = 0.6;
};

struct DixmierEstimate {
  std::optional<double> value;
  double liminf = 0.0;
  double limsup = 0.0;
  double spread = 0.0;
  bool measurable = false;
  std::vector<Index> schedule;
  std::vector<double> gamma_values;
  /// Limit of the line through consecutive (1/ln N, gamma_N) points; after
  /// smoothing when enabled. Entries before window_start are unused.
  std::vector<double> extrapolated;
  std::size_t window_start = 0;
};

inline std::vector<Index> dyadic_schedule(Index cap) {
  std::vector<Index> out;
  for (Index n = 2; n <= cap && n != 0; n *= 2) out.push_back(n);
  return out;
}

/// gamma_N along N_j = 2^j, extrapolated linearly in 1/ln N. Measurability
/// is decided on the spread of the extrapolated values over the last window.
inline DixmierEstimate dixmier_estimate(const SpectralSequence& s, const DixmierOptions& options = {}) {
  DixmierEstimate est;
  est.schedule = dyadic_schedule(options.cap);
  const std::size_t count = est.schedule.size();
  if (count < 4) fail(ErrorKind::insufficient_data, "schedule cap must be at least 2^4");
  const std::vector<double> sigma = partial_sums(s, est.schedule);
  std::vector<double> x(count);
  for (std::size_t j = 0; j < count; ++j) {
    x[j] = 1.0 / std::log(static_cast<double>(est.schedule[j]));
    est.gamma_values.push_back(sigma[j] * x[j]);
  }
  // Schedule entry j holds N = 2^(j+1).
  const auto total = static_cast<double>(count);
  est.window_start = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(options.window_fraction * total)) - 1, 1, count - 2);

  est.extrapolated.assign(count, 0.0);
  double running = 0.0;
  std::size_t seen = 0;
  for (std::size_t j = est.window_start; j < count; ++j) {
    const double g0 = est.gamma_values[j - 1];
    const double g1 = est.gamma_values[j];
    const double local = g1 + (g1 - g0) * x[j] / (x[j - 1] - x[j]);
    running += local;
    ++seen;
    est.extrapolated[j] = options.smoothing ? running / static_cast<double>(seen) : local;
  }
  const auto first = est.extrapolated.begin() + static_cast<std::ptrdiff_t>(est.window_start);
  const auto [lo, hi] = std::minmax_element(first, est.extrapolated.end());
  est.liminf = *lo;
  est.limsup = *hi;
  est.spread = est.limsup - est.liminf;
  const double last = est.extrapolated.back();
  est.measurable = est.spread < options.tolerance * std::max(1.0, std::abs(last));
  if (est.measurable) est.value = last;
  return est;
}

/// alpha = -p for a tail ~ n^p (ln n)^q; log factors do not change alpha.
inline Rational order_of(const SpectralSequence& s) {
  if (!s.has_tail()) fail(ErrorKind::no_tail, "order_of needs a symbolic tail");
  const auto rate = s.tail()->rate();
  if (!rate) fail(ErrorKind::certification_failure, "tail class of '" + s.tail()->key() + "' is not resolved");
  if (rate->zero) fail(ErrorKind::precondition, "the zero tail has no largest order");
  return -rate->power;
}

struct ScaleReport {
  Index factor = 2;
  std::vector<Index> points;
  /// |gamma_{mN} - gamma_N|
  std::vector<double> discrepancy;
  /// |(sigma_{mN} - sigma_N)/ln m - gamma_N|: local log-density against the mean.
  std::vector<double> scaled_discrepancy;
  double max_discrepancy = 0.0;
  double max_scaled_discrepancy = 0.0;
};

inline ScaleReport scale_check(const SpectralSequence& s, Index factor, const DixmierOptions& options = {}) {
  if (factor < 2) fail(ErrorKind::precondition, "scale factor must be at least 2");
  if (!s.has_tail()) fail(ErrorKind::no_tail, "scale_check needs a symbolic tail");
  ScaleReport r;
  r.factor = factor;
  const std::vector<Index> schedule = dyadic_schedule(options.cap);
  if (schedule.size() < 4) fail(ErrorKind::insufficient_data, "schedule cap must be at least 2^4");
  const auto start = static_cast<std::size_t>(
      std::ceil(options.window_fraction * static_cast<double>(schedule.size()))) - 1;
  std::vector<Index> all;
  for (std::size_t j = start; j < schedule.size(); ++j) {
    r.points.push_back(schedule[j]);
    all.push_back(schedule[j]);
    all.push_back(schedule[j] * factor);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  const std::vector<double> sig = partial_sums(s, all);
  auto sigma = [&](Index n) {
    return sig[static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), n) - all.begin())];
  };
  const double lm = std::log(static_cast<double>(factor));
  for (const Index n : r.points) {
    const double ln = std::log(static_cast<double>(n));
    const double g = sigma(n) / ln;
    const double gm = sigma(n * factor) / (ln + lm);
    r.discrepancy.push_back(std::abs(gm - g));
    r.scaled_discrepancy.push_back(std::abs((sigma(n * factor) - sigma(n)) / lm - g));
  }
  r.max_discrepancy = *std::max_element(r.discrepancy.begin(), r.discrepancy.end());
  r.max_scaled_discrepancy = *std::max_element(r.scaled_discrepancy.begin(), r.scaled_discrepancy.end());
  return r;
}

/// gamma_N >= 0 along the schedule.
inline bool positivity_check(const SpectralSequence& s, const DixmierOptions& options = {}) {
  const std::vector<Index> schedule = dyadic_schedule(options.cap);
  const std::vector<double> sig = partial_sums(s, schedule);
  return std::all_of(sig.begin(), sig.end(), [](double v) { return v >= 0.0; });
}

struct LinearityReport {
  Index n = 0;
  double gamma_sum = 0.0;
  double gamma_first = 0.0;
  double gamma_second = 0.0;
  double residual = 0.0;
};

/// Compares gamma_N of the pointwise sum of two sorted sequences with the sum
/// of their gamma_N.
inline LinearityReport linearity_check(const SpectralSequence& s1, const SpectralSequence& s2, Index n) {
  if (!s1.has_tail() || !s2.has_tail()) fail(ErrorKind::no_tail, "linearity_check needs both tails");
  if (n < 2) fail(ErrorKind::precondition, "linearity_check needs N >= 2");
  CompensatedSum a, b, sum;
  for (Index k = 1; k <= n; ++k) {
    const double x = s1.at(k);
    const double y = s2.at(k);
    a.add(x);
    b.add(y);
    sum.add(x);
    sum.add(y);
  }
  const double ln = std::log(static_cast<double>(n));
  LinearityReport r;
  r.n = n;
  r.gamma_first = a.value() / ln;
  r.gamma_second = b.value() / ln;
  r.gamma_sum = sum.value() / ln;
  r.residual = std::abs(r.gamma_sum - r.gamma_first - r.gamma_second);
  return r;
}

}  // namespace infinikit::dixmier
