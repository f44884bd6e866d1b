#pragma once

// Finite truncations of operators: diagonal embeddings of sequences,
// orthogonal conjugation, |T| and its decreasing spectrum.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infinikit/error.hpp"
#include "infinikit/matrix.hpp"
#include "infinikit/rate_seq.hpp"

namespace infinikit::opcalc {

inline std::size_t max_dimension = 1024;

class OperatorTrunc {
 public:
  OperatorTrunc(Matrix entries, std::string label) : entries_(std::move(entries)), label_(std::move(label)) {
    if (!entries_.square()) fail(ErrorKind::dimension_mismatch, "operator truncation must be square");
    if (entries_.rows() == 0) fail(ErrorKind::empty_input, "operator truncation needs dim >= 1");
    if (entries_.rows() > max_dimension)
      fail(ErrorKind::invalid_input, "dimension " + std::to_string(entries_.rows()) +
                                         " exceeds the cap " + std::to_string(max_dimension));
    for (double x : entries_.data())
      if (!std::isfinite(x)) fail(ErrorKind::invalid_input, "non-finite matrix entry");
  }

  std::size_t dim() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  const std::string& label() const noexcept { return label_; }

 private:
  Matrix entries_;
  std::string label_;
};

/// mu_1 >= mu_2 >= ... >= 0, optionally continued by a symbolic tail that
/// gives mu_n for indices past the truncation.
class SpectralSequence {
 public:
  explicit SpectralSequence(std::vector<double> values, std::optional<hyperseq::RateSeq> tail = {})
      : values_(std::move(values)), tail_(std::move(tail)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
        fail(ErrorKind::invalid_input, "spectral values must be finite and nonnegative");
      if (i > 0 && values_[i] > values_[i - 1])
        fail(ErrorKind::invalid_input, "spectral values must be nonincreasing");
    }
  }

  const std::vector<double>& values() const noexcept { return values_; }
  const std::optional<hyperseq::RateSeq>& tail() const noexcept { return tail_; }
  bool has_tail() const noexcept { return tail_.has_value(); }

  SpectralSequence with_tail(hyperseq::RateSeq tail) const { return SpectralSequence(values_, std::move(tail)); }

  /// mu_n for n >= 1; past the truncation the tail is sampled.
  double at(std::uint64_t n) const {
    if (n >= 1 && n <= values_.size()) return values_[n - 1];
    if (!tail_)
      fail(ErrorKind::insufficient_data,
           "index " + std::to_string(n) + " beyond a truncation of length " + std::to_string(values_.size()));
    return (*tail_)(n);
  }

 private:
  std::vector<double> values_;
  std::optional<hyperseq::RateSeq> tail_;
};

inline OperatorTrunc diag_embed(std::span<const double> prefix) {
  if (prefix.empty()) fail(ErrorKind::empty_input, "diag_embed needs at least one entry");
  return OperatorTrunc(Matrix::diagonal(prefix), "diagonal");
}

/// diag(u_1, ..., u_N) for a sequence u.
inline OperatorTrunc diag_embed(const hyperseq::RateSeq& u, std::size_t n) {
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = u(i + 1);
  return diag_embed(d);
}

namespace detail {

inline int determinant_sign(Matrix a) {
  const std::size_t n = a.rows();
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      sign = -sign;
    }
    if (a(col, col) < 0) sign = -sign;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
    }
  }
  return sign;
}

}  // namespace detail

/// Haar-like random rotation: Gram-Schmidt (applied twice) on a Gaussian
/// matrix, with the sign of one column fixed so that det = +1.
inline OperatorTrunc random_orthogonal(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) fail(ErrorKind::empty_input, "random_orthogonal needs dim >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Matrix q(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) q(i, j) = gauss(rng);
  for (std::size_t j = 0; j < dim; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < dim; ++i) dot += q(i, k) * q(i, j);
        for (std::size_t i = 0; i < dim; ++i) q(i, j) -= dot * q(i, k);
      }
    double norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < dim; ++i) q(i, j) /= norm;
  }
  if (detail::determinant_sign(q) < 0)
    for (std::size_t i = 0; i < dim; ++i) q(i, 0) = -q(i, 0);
  return OperatorTrunc(std::move(q), "orthogonal");
}

inline double orthogonality_defect(const Matrix& q) {
  return (q.transpose() * q - Matrix::identity(q.rows())).max_abs();
}

inline OperatorTrunc rotation(double angle) {
  Matrix r(2, 2);
  r(0, 0) = std::cos(angle);
  r(0, 1) = -std::sin(angle);
  r(1, 0) = std::sin(angle);
  r(1, 1) = std::cos(angle);
  return OperatorTrunc(std::move(r), "orthogonal");
}

/// Q^T T Q.
inline OperatorTrunc conjugate(const OperatorTrunc& t, const OperatorTrunc& q) {
  if (t.dim() != q.dim())
    fail(ErrorKind::dimension_mismatch,
         "conjugate: dims " + std::to_string(t.dim()) + " and " + std::to_string(q.dim()));
  const double defect = orthogonality_defect(q.entries());
  if (defect > 1e-10 * static_cast<double>(q.dim()))
    fail(ErrorKind::non_orthogonal, "conjugating matrix is not orthogonal (defect " + std::to_string(defect) + ")");
  return OperatorTrunc(q.entries().transpose() * t.entries() * q.entries(), "conjugated");
}

namespace detail {

// Eigen-pairs of |T|: for symmetric T those of T with |lambda|, otherwise
// those of T^T T with sqrt(lambda).
inline EigenDecomposition absolute_eigen(const OperatorTrunc& t) {
  const Matrix& a = t.entries();
  if (a.is_symmetric()) {
    EigenDecomposition e = symmetric_eigen(a);
    for (double& x : e.values) x = std::abs(x);
    return e;
  }
  EigenDecomposition e = symmetric_eigen(a.transpose() * a);
  const double floor = -1e-10 * std::max(1.0, a.max_abs() * a.max_abs());
  for (double& x : e.values) {
    if (x < floor) fail(ErrorKind::eigensolver_failure, "T^T T has a negative eigenvalue");
    x = std::sqrt(std::max(x, 0.0));
  }
  return e;
}

}  // namespace detail

/// |T| = (T^T T)^(1/2), symmetric positive semidefinite.
inline OperatorTrunc symmetrise(const OperatorTrunc& t) {
  const EigenDecomposition e = detail::absolute_eigen(t);
  const std::size_t n = t.dim();
  Matrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = e.values[k];
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double vik = e.vectors(i, k) * s;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * e.vectors(j, k);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) r(i, j) = r(j, i) = 0.5 * (r(i, j) + r(j, i));
  return OperatorTrunc(std::move(r), "symmetrised");
}

/// Eigenvalues of |T| in nonincreasing order; ties keep solver order.
inline SpectralSequence spectrum_desc(const OperatorTrunc& t) {
  const EigenDecomposition e = detail::absolute_eigen(t);
  std::vector<std::size_t> order(e.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return e.values[a] > e.values[b]; });
  std::vector<double> values;
  values.reserve(order.size());
  for (std::size_t k : order) values.push_back(e.values[k]);
  return SpectralSequence(std::move(values));
}

/// Compactness is a property of the tail: mu_n -> 0.
inline bool is_compact_model(const SpectralSequence& s) {
  if (!s.has_tail()) fail(ErrorKind::no_tail, "compactness needs a symbolic tail");
  const hyperseq::Limit l = s.tail()->limit();
  if (l.kind == hyperseq::LimitKind::unknown)
    fail(ErrorKind::certification_failure, "limit of the tail '" + s.tail()->key() + "' is not certified");
  return l.is_zero();
}

struct CommutatorReport {
  Matrix real;
  Matrix imag;
  /// Frobenius norm of [X, P] - i*hbar*I.
  double deviation = 0.0;
  double trace_real = 0.0;
  double trace_imag = 0.0;
};

/// [X, P] for X = sqrt(hbar/2)(a + a^dagger), P = i sqrt(hbar/2)(a^dagger - a)
/// built from the dim x dim truncated ladder operator a.
inline CommutatorReport ladder_commutator(std::size_t dim, double hbar) {
  if (dim < 2) fail(ErrorKind::precondition, "ladder_commutator needs dim >= 2");
  Matrix a(dim, dim);
  for (std::size_t k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Matrix ad = a.transpose();
  const double s = std::sqrt(hbar / 2.0);
  const Matrix x = s * (a + ad);
  const Matrix p_imag = s * (ad - a);  // P = i * p_imag
  CommutatorReport r;
  r.real = Matrix(dim, dim);
  r.imag = x * p_imag - p_imag * x;
  r.deviation = (r.imag - hbar * Matrix::identity(dim)).frobenius();
  r.trace_real = 0.0;
  r.trace_imag = r.imag.trace();
  return r;
}

}  // namespace infinikit::opcalc
