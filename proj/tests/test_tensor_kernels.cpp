#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "logstrain/errors.hpp"
#include "logstrain/tensor_kernels.hpp"
#include "support/sampling.hpp"

using namespace logstrain;
using logstrain::testing::Sampler;

namespace {

const double kE = std::exp(1.0);
const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

void expect_close(const Matrix& a, const Matrix& b, double tol) {
  EXPECT_LE(max_abs_diff(a, b), tol) << to_string(a) << " vs " << to_string(b);
}

void check_decomposition(const SymMatrix& a) {
  const EigenDecomposition ed = sym_eigen(a);
  const int n = a.dim();
  const Matrix& q = ed.eigenvectors;
  EXPECT_LE((q.transposed() * q - Matrix::identity(n)).norm(), 1e-12);
  const Matrix rebuilt = q * Matrix::diagonal(ed.eigenvalues) * q.transposed();
  EXPECT_LE((rebuilt - a.full()).norm(), 1e-10 * std::max(1.0, a.norm()));
  for (int i = 1; i < n; ++i) EXPECT_GE(ed.eigenvalues[i - 1], ed.eigenvalues[i]);
}

}  // namespace

TEST(SymEigen, IdentityUsesIdentityBasis) {
  const EigenDecomposition ed = sym_eigen(SymMatrix::identity(2));
  EXPECT_EQ(ed.eigenvalues[0], 1.0);
  EXPECT_EQ(ed.eigenvalues[1], 1.0);
  expect_close(ed.eigenvectors, Matrix::identity(2), 0.0);
  const EigenDecomposition ed3 = sym_eigen(SymMatrix::identity(3));
  expect_close(ed3.eigenvectors, Matrix::identity(3), 0.0);
}

TEST(SymEigen, ShearStretchEigenvalues) {
  const double s = std::sqrt(5.0);
  const EigenDecomposition ed = sym_eigen(SymMatrix(2, {2.0 / s, 1.0 / s, 1.0 / s, 3.0 / s}));
  EXPECT_NEAR(ed.eigenvalues[0], kGolden, 1e-15);
  EXPECT_NEAR(ed.eigenvalues[1], kGolden - 1.0, 1e-15);
}

TEST(SymEigen, DiagonalMatrixIsSortedDescending) {
  const EigenDecomposition ed = sym_eigen(SymMatrix::diagonal(Vector{std::exp(-2.0), std::exp(2.0)}));
  EXPECT_DOUBLE_EQ(ed.eigenvalues[0], std::exp(2.0));
  EXPECT_DOUBLE_EQ(ed.eigenvalues[1], std::exp(-2.0));
  // Columns are the coordinate axes, swapped to follow the sort.
  EXPECT_NEAR(std::abs(ed.eigenvectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(ed.eigenvectors(0, 1)), 1.0, 1e-15);
}

TEST(SymEigen, SignConventionMakesFirstComponentPositive) {
  Sampler rng(11);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 2;
    const EigenDecomposition ed = sym_eigen(rng.symmetric(n, 1.0));
    for (int c = 0; c < n; ++c) {
      const Vector v = ed.eigenvectors.column(c);
      for (int k = 0; k < n; ++k) {
        if (std::abs(v[k]) > 1e-12) {
          EXPECT_GT(v[k], 0.0);
          break;
        }
      }
    }
  }
}

TEST(SymEigen, RandomMatricesReconstruct) {
  Sampler rng(12);
  for (int i = 0; i < 2000; ++i) check_decomposition(rng.symmetric(2 + i % 2, 10.0));
}

TEST(SymEigen, RepeatedAndNearlyRepeatedEigenvalues) {
  Sampler rng(13);
  for (int i = 0; i < 500; ++i) {
    const Matrix q = rng.rotation(3);
    const double a = rng.uniform(0.5, 2.0);
    const double gap = std::pow(10.0, -rng.uniform(0.0, 14.0));
    check_decomposition(congruence(q, SymMatrix::diagonal(Vector{a, a, a + gap})));
    check_decomposition(congruence(q, SymMatrix::diagonal(Vector{a + gap, a, a - gap})));
    check_decomposition(congruence(q, SymMatrix::diagonal(Vector{a, a, -a})));
  }
}

TEST(SymEigen, RejectsNonFiniteInput) {
  SymMatrix a = SymMatrix::identity(3);
  a.set(0, 1, std::numeric_limits<double>::quiet_NaN());
  EXPECT_THROW(sym_eigen(a), InvalidArgument);
  a.set(0, 1, std::numeric_limits<double>::infinity());
  EXPECT_THROW(matrix_log_psym(a), InvalidArgument);
}

TEST(MatrixLog, Examples) {
  expect_close(matrix_log_psym(SymMatrix::identity(2)), Matrix(2), 0.0);
  expect_close(matrix_log_psym(SymMatrix::identity(3)), Matrix(3), 0.0);
  expect_close(matrix_log_psym(SymMatrix::diagonal(Vector{std::exp(-2.0), std::exp(2.0)})),
               Matrix(2, {-2, 0, 0, 2}), 1e-15);
  const double s = std::sqrt(5.0);
  const double l = std::log(kGolden);
  EXPECT_NEAR(l, 0.481212, 1e-6);
  expect_close(matrix_log_psym(SymMatrix(2, {2.0 / s, 1.0 / s, 1.0 / s, 3.0 / s})),
               Matrix(2, {-l / s, 2.0 * l / s, 2.0 * l / s, l / s}), 1e-15);
}

TEST(MatrixLog, RejectsIndefiniteAndSingular) {
  try {
    matrix_log_psym(SymMatrix::diagonal(Vector{1.0, -0.5}));
    FAIL() << "expected NotPositiveDefinite";
  } catch (const NotPositiveDefinite& e) {
    EXPECT_EQ(e.eigenvalue(), -0.5);
  }
  EXPECT_THROW(matrix_log_psym(SymMatrix::diagonal(Vector{1.0, 1.0, 0.0})), NotPositiveDefinite);
  EXPECT_THROW(matrix_log_psym(SymMatrix::diagonal(Vector{1.0, 1e-13})), NotPositiveDefinite);
  EXPECT_NO_THROW(matrix_log_psym(SymMatrix::diagonal(Vector{1.0, 1e-11})));
}

TEST(MatrixLog, NearlyIdentityIsAccurate) {
  // log(1 + X) ~ X - X^2/2 for tiny X; 1 + d is exact for d = 2^-30.
  const double d = std::ldexp(1.0, -30);
  const SymMatrix p(2, {1.0 + d, d, d, 1.0});
  const SymMatrix l = matrix_log_psym(p);
  EXPECT_NEAR(l(0, 1), d - d * d / 2, 4e-16);
  EXPECT_NEAR(l(0, 0), d - d * d, 4e-16);
}

TEST(MatrixExp, Examples) {
  expect_close(matrix_exp_sym(SymMatrix(2)), Matrix::identity(2), 0.0);
  expect_close(matrix_exp_sym(SymMatrix(3)), Matrix::identity(3), 0.0);
  expect_close(matrix_exp_sym(SymMatrix(2, {-2, 0, 0, 2})),
               Matrix::diagonal(Vector{std::exp(-2.0), std::exp(2.0)}), 1e-14);
  // Oracle: [[0,b],[b,0]] has eigenvectors (1,+-1)/sqrt2 with eigenvalues +-b.
  expect_close(matrix_exp_sym(SymMatrix(2, {0, 1, 1, 0})),
               Matrix(2, {std::cosh(1.0), std::sinh(1.0), std::sinh(1.0), std::cosh(1.0)}), 1e-15);
}

TEST(MatrixExp, RoundTripsWithLog) {
  Sampler rng(14);
  for (int i = 0; i < 2000; ++i) {
    const int n = 2 + i % 2;
    const SymMatrix s = rng.symmetric(n, 2.0);
    expect_close(matrix_log_psym(matrix_exp_sym(s)), s, 1e-10 * std::max(1.0, s.norm()));
    const SymMatrix p = rng.spd(n, 1e-3, 1e3);
    EXPECT_LE((matrix_exp_sym(matrix_log_psym(p)) - p).norm(), 1e-9 * p.norm());
  }
}

TEST(MatrixLog, IsotropyAndDeterminant) {
  Sampler rng(15);
  for (int i = 0; i < 10000; ++i) {
    const int n = 2 + i % 2;
    const SymMatrix p = rng.spd(n, 1e-3, 1e3);
    const SymMatrix lp = matrix_log_psym(p);
    const Matrix q = rng.rotation(n);
    EXPECT_LE((matrix_log_psym(congruence(q, p)) - congruence(q, lp)).norm(), 1e-10 * std::max(1.0, lp.norm()));
    const double ld = std::log(p.determinant());
    EXPECT_LE(std::abs(lp.trace() - ld), 1e-10 * std::max(1.0, std::abs(ld)));
  }
}

TEST(Polar, Examples) {
  const PolarFactors id = polar_decompose(Matrix::identity(2));
  expect_close(id.R, Matrix::identity(2), 0.0);
  expect_close(id.U, Matrix::identity(2), 0.0);

  const PolarFactors d = polar_decompose(Matrix::diagonal(Vector{2.0, 3.0}));
  expect_close(d.R, Matrix::identity(2), 1e-15);
  expect_close(d.U, Matrix::diagonal(Vector{2.0, 3.0}), 1e-15);

  for (double t : {-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    const double s = std::sqrt(t * t + 4.0);
    const PolarFactors p = polar_decompose(Matrix(2, {1.0, t, 0.0, 1.0}));
    expect_close(p.U, Matrix(2, {2.0 / s, t / s, t / s, (t * t + 2.0) / s}), 1e-14 * std::max(1.0, t * t));
    expect_close(p.R, Matrix(2, {2.0 / s, t / s, -t / s, 2.0 / s}), 1e-14);
  }
}

TEST(Polar, RandomFactorsAreRotationTimesStretch) {
  Sampler rng(16);
  for (int i = 0; i < 10000; ++i) {
    const int n = 2 + i % 2;
    const Matrix f = rng.deformation(n, 0.1, 10.0);
    const PolarFactors p = polar_decompose(f);
    EXPECT_LE((p.R.transposed() * p.R - Matrix::identity(n)).norm(), 1e-12);
    EXPECT_GT(p.R.determinant(), 0.0);
    EXPECT_LE((p.R * p.U.full() - f).norm(), 1e-10 * std::max(1.0, f.norm()));
    EXPECT_GT(sym_eigen(p.U).eigenvalues[n - 1], 0.0);
  }
}

TEST(Polar, RejectsOrientationReversal) {
  EXPECT_THROW(polar_decompose(Matrix::diagonal(Vector{1.0, -1.0})), OrientationError);
  EXPECT_THROW(polar_decompose(Matrix(3)), OrientationError);
  try {
    polar_decompose(Matrix::diagonal(Vector{-2.0, 1.0, 1.0}));
  } catch (const OrientationError& e) {
    EXPECT_EQ(e.determinant(), -2.0);
    EXPECT_NE(std::string(e.what()).find("det F > 0"), std::string::npos);
  }
}

TEST(Deviatoric, Examples) {
  expect_close(deviatoric(SymMatrix::identity(3)), Matrix(3), 0.0);
  expect_close(deviatoric(SymMatrix(2, {-2, 0, 0, 2})), Matrix(2, {-2, 0, 0, 2}), 0.0);
  expect_close(deviatoric(SymMatrix::diagonal(Vector{1, 2, 3})), Matrix::diagonal(Vector{-1, 0, 1}), 0.0);
}

TEST(Deviatoric, IdempotentAndTraceFree) {
  Sampler rng(17);
  for (int i = 0; i < 2000; ++i) {
    const int n = 2 + i % 2;
    const SymMatrix s = rng.symmetric(n, 100.0);
    const SymMatrix d = deviatoric(s);
    EXPECT_LE(std::abs(d.trace()), 1e-14 * std::max(1.0, s.norm()));
    EXPECT_LE(std::abs(inner(d, SymMatrix::identity(n))), 1e-14 * std::max(1.0, s.norm()));
    expect_close(deviatoric(d), d, 1e-14 * std::max(1.0, s.norm()));
  }
}

TEST(Rotations, AreSpecialOrthogonal) {
  Sampler rng(18);
  for (int i = 0; i < 500; ++i) {
    const Matrix q = rng.rotation(3);
    EXPECT_LE((q.transposed() * q - Matrix::identity(3)).norm(), 1e-14);
    EXPECT_NEAR(q.determinant(), 1.0, 1e-14);
  }
  expect_close(rotation_2d(std::numbers::pi / 2), Matrix(2, {0, -1, 1, 0}), 1e-16);
  expect_close(rotation_3d(Vector{0, 0, 0}), Matrix::identity(3), 0.0);
}

TEST(MatrixBasics, SymmetricStorageStaysSymmetric) {
  SymMatrix s(3);
  s.set(0, 2, 1.25);
  EXPECT_EQ(s(2, 0), 1.25);
  const SymMatrix p = SymMatrix::symmetric_part(Matrix(2, {1, 2, 4, 3}));
  EXPECT_EQ(p(0, 1), 3.0);
  EXPECT_EQ(p(1, 0), 3.0);
  EXPECT_THROW(Matrix(2, {1, 2, 3}), InvalidArgument);
  EXPECT_THROW(Matrix::identity(2) + Matrix::identity(3), InvalidArgument);
}

TEST(MatrixBasics, DeterminantAndInverse) {
  Sampler rng(19);
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 2;
    const Matrix f = rng.deformation(n, 0.1, 10.0);
    EXPECT_LE((f * f.inverse() - Matrix::identity(n)).norm(), 1e-12 * f.norm() * f.inverse().norm());
  }
  EXPECT_THROW(Matrix(2).inverse(), std::exception);
  EXPECT_DOUBLE_EQ(Matrix(2, {1, kE, 0, 1}).determinant(), 1.0);
}
