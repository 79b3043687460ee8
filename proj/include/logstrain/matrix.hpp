#pragma once

// Small dense real vectors and matrices of dimension 2 or 3.
//
// Storage is a fixed 3x3 array so that every value type is trivially
// copyable and lives on the stack; the active dimension is carried at
// runtime because model configurations select n when they are loaded.

#include <array>
#include <cmath>
#include <initializer_list>
#include <string>

namespace logstrain {

class Vector {
 public:
  explicit Vector(int n = 3);
  Vector(std::initializer_list<double> entries);

  static Vector unit(int n, int axis);

  int dim() const noexcept { return n_; }
  double operator[](int i) const noexcept { return a_[i]; }
  double& operator[](int i) noexcept { return a_[i]; }

  double norm() const noexcept;
  bool all_finite() const noexcept;

 private:
  int n_;
  std::array<double, 3> a_{};
};

double dot(const Vector& u, const Vector& v) noexcept;
Vector cross(const Vector& u, const Vector& v);
Vector operator*(double s, const Vector& v);
Vector operator+(const Vector& u, const Vector& v);
Vector operator-(const Vector& u, const Vector& v);
Vector normalized(const Vector& v);

class SymMatrix;

// General square matrix: deformation gradients, rotations, plastic distortions.
class Matrix {
 public:
  explicit Matrix(int n = 3);
  // Row-major entries; the count must be n*n.
  Matrix(int n, std::initializer_list<double> row_major);

  static Matrix identity(int n);
  static Matrix diagonal(const Vector& d);
  static Matrix from_row_major(int n, const double* entries);

  int dim() const noexcept { return n_; }
  double operator()(int i, int j) const noexcept { return a_[3 * i + j]; }
  double& operator()(int i, int j) noexcept { return a_[3 * i + j]; }

  Vector column(int j) const;
  void set_column(int j, const Vector& v);

  Matrix transposed() const;
  double trace() const noexcept;
  double determinant() const noexcept;
  Matrix inverse() const;
  double norm() const noexcept;  // Frobenius
  bool all_finite() const noexcept;

  Matrix& operator+=(const Matrix& b);
  Matrix& operator-=(const Matrix& b);
  Matrix& operator*=(double s);

 private:
  int n_;
  std::array<double, 9> a_{};
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator-(Matrix a);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& v);
Matrix outer(const Vector& u, const Vector& v);

// Frobenius inner product <A, B> = tr(A^T B).
double inner(const Matrix& a, const Matrix& b) noexcept;

// Largest absolute entry difference, for test and diagnostics use.
double max_abs_diff(const Matrix& a, const Matrix& b) noexcept;

// Symmetric matrix. The two off-diagonal copies are written together, so
// (i,j) == (j,i) holds bit-for-bit at all times.
class SymMatrix {
 public:
  explicit SymMatrix(int n = 3);
  // Row-major entries; only the upper triangle is read.
  SymMatrix(int n, std::initializer_list<double> row_major);

  static SymMatrix identity(int n);
  static SymMatrix diagonal(const Vector& d);
  // Reads the upper triangle of a.
  static SymMatrix from_upper(const Matrix& a);
  // (a + a^T) / 2.
  static SymMatrix symmetric_part(const Matrix& a);

  int dim() const noexcept { return m_.dim(); }
  double operator()(int i, int j) const noexcept { return m_(i, j); }
  void set(int i, int j, double value) noexcept;

  const Matrix& full() const noexcept { return m_; }
  operator const Matrix&() const noexcept { return m_; }

  double trace() const noexcept { return m_.trace(); }
  double determinant() const noexcept { return m_.determinant(); }
  double norm() const noexcept { return m_.norm(); }
  bool all_finite() const noexcept { return m_.all_finite(); }

  SymMatrix& operator+=(const SymMatrix& b);
  SymMatrix& operator-=(const SymMatrix& b);
  SymMatrix& operator*=(double s);

 private:
  Matrix m_;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a, const SymMatrix& b);
SymMatrix operator-(SymMatrix a);
SymMatrix operator*(double s, SymMatrix a);

// Q * S * Q^T, symmetrized.
SymMatrix congruence(const Matrix& q, const SymMatrix& s);

std::string to_string(const Matrix& a);

}  // namespace logstrain
