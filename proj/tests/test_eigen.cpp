#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "infinikit/matrix.hpp"

namespace {

using infinikit::Matrix;
using infinikit::symmetric_eigen;

Matrix random_symmetric(infinikit::testing::Gen& gen, std::size_t n) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = gen.real(-1, 1);
  return a;
}

TEST(SymmetricEigen, Diagonal) {
  const double d[] = {3, -1, 2};
  auto e = symmetric_eigen(Matrix::diagonal(d));
  std::sort(e.values.begin(), e.values.end());
  EXPECT_DOUBLE_EQ(e.values[0], -1);
  EXPECT_DOUBLE_EQ(e.values[1], 2);
  EXPECT_DOUBLE_EQ(e.values[2], 3);
}

TEST(SymmetricEigen, TwoByTwoClosedForm) {
  Matrix a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = a(1, 0) = 1;
  a(1, 1) = 2;
  auto e = symmetric_eigen(a);
  std::sort(e.values.begin(), e.values.end());
  EXPECT_NEAR(e.values[0], 1, 1e-15);
  EXPECT_NEAR(e.values[1], 3, 1e-15);
}

TEST(SymmetricEigen, ReconstructsRandomMatrices) {
  infinikit::testing::Gen gen(41);
  for (std::size_t n : {1, 2, 3, 5, 16, 64}) {
    const Matrix a = random_symmetric(gen, n);
    const auto e = symmetric_eigen(a);
    const Matrix& v = e.vectors;
    EXPECT_LT((v.transpose() * v - Matrix::identity(n)).max_abs(), 1e-12 * static_cast<double>(n));
    const Matrix rebuilt = v * Matrix::diagonal(e.values) * v.transpose();
    EXPECT_LT((rebuilt - a).max_abs(), 1e-12 * static_cast<double>(n)) << n;
  }
}

TEST(SymmetricEigen, IterationCapRaises) {
  infinikit::testing::Gen gen(2);
  const Matrix a = random_symmetric(gen, 8);
  EXPECT_THROW(symmetric_eigen(a, {.tolerance = 0.0, .max_iterations_per_value = 1}), infinikit::Error);
}

TEST(Matrix, Basics) {
  Matrix a(2, 3, 1.0);
  EXPECT_EQ(a.transpose().shape(), "3x2");
  EXPECT_THROW(a * a, infinikit::Error);
  EXPECT_DOUBLE_EQ((a * a.transpose()).trace(), 6.0);
  EXPECT_FALSE(a.is_symmetric());
}

}  // namespace
