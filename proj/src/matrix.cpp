#include "logstrain/matrix.hpp"

#include <algorithm>
#include <cstdio>

#include "compensated.hpp"
#include "logstrain/errors.hpp"

namespace logstrain {

namespace {

void check_dim(int n) {
  if (n != 2 && n != 3) {
    throw InvalidArgument("dimension must be 2 or 3, got " + std::to_string(n));
  }
}

void check_same(int a, int b) {
  if (a != b) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(a) + " vs " +
                          std::to_string(b));
  }
}

}  // namespace

// ---------------------------------------------------------------- Vector

Vector::Vector(int n) : n_(n) { check_dim(n); }

Vector::Vector(std::initializer_list<double> entries)
    : n_(static_cast<int>(entries.size())) {
  check_dim(n_);
  std::copy(entries.begin(), entries.end(), a_.begin());
}

Vector Vector::unit(int n, int axis) {
  Vector v(n);
  v[axis] = 1.0;
  return v;
}

double Vector::norm() const noexcept { return std::sqrt(dot(*this, *this)); }

bool Vector::all_finite() const noexcept {
  for (int i = 0; i < n_; ++i) {
    if (!std::isfinite(a_[i])) return false;
  }
  return true;
}

double dot(const Vector& u, const Vector& v) noexcept {
  double s = 0.0;
  for (int i = 0; i < u.dim(); ++i) s += u[i] * v[i];
  return s;
}

Vector cross(const Vector& u, const Vector& v) {
  if (u.dim() != 3 || v.dim() != 3) throw InvalidArgument("cross product needs n = 3");
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

Vector operator*(double s, const Vector& v) {
  Vector r(v.dim());
  for (int i = 0; i < v.dim(); ++i) r[i] = s * v[i];
  return r;
}

Vector operator+(const Vector& u, const Vector& v) {
  check_same(u.dim(), v.dim());
  Vector r(u.dim());
  for (int i = 0; i < u.dim(); ++i) r[i] = u[i] + v[i];
  return r;
}

Vector operator-(const Vector& u, const Vector& v) {
  check_same(u.dim(), v.dim());
  Vector r(u.dim());
  for (int i = 0; i < u.dim(); ++i) r[i] = u[i] - v[i];
  return r;
}

Vector normalized(const Vector& v) { return (1.0 / v.norm()) * v; }

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(int n) : n_(n) { check_dim(n); }

Matrix::Matrix(int n, std::initializer_list<double> row_major) : n_(n) {
  check_dim(n);
  if (static_cast<int>(row_major.size()) != n * n) {
    throw InvalidArgument("expected " + std::to_string(n * n) + " entries");
  }
  auto it = row_major.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) (*this)(i, j) = *it++;
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.dim());
  for (int i = 0; i < d.dim(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_row_major(int n, const double* entries) {
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = entries[n * i + j];
  return m;
}

Vector Matrix::column(int j) const {
  Vector v(n_);
  for (int i = 0; i < n_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(int j, const Vector& v) {
  for (int i = 0; i < n_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::transposed() const {
  Matrix t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const noexcept {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

double Matrix::determinant() const noexcept {
  using detail::minor2;
  const Matrix& m = *this;
  if (n_ == 2) return minor2(m(0, 0), m(0, 1), m(1, 0), m(1, 1)).value();
  const auto m0 = minor2(m(1, 1), m(1, 2), m(2, 1), m(2, 2));
  const auto m1 = minor2(m(1, 0), m(1, 2), m(2, 0), m(2, 2));
  const auto m2 = minor2(m(1, 0), m(1, 1), m(2, 0), m(2, 1));
  return (m0 * m(0, 0) - m1 * m(0, 1) + m2 * m(0, 2)).value();
}

Matrix Matrix::inverse() const {
  const double det = determinant();
  if (det == 0.0 || !std::isfinite(det)) throw InvalidArgument("matrix is singular");
  const Matrix& m = *this;
  Matrix inv(n_);
  if (n_ == 2) {
    inv(0, 0) = m(1, 1) / det;
    inv(0, 1) = -m(0, 1) / det;
    inv(1, 0) = -m(1, 0) / det;
    inv(1, 1) = m(0, 0) / det;
    return inv;
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // cofactor of (j, i)
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      inv(i, j) = detail::minor2(m(r0, c0), m(r0, c1), m(r1, c0), m(r1, c1)).value() / det;
    }
  }
  return inv;
}

double Matrix::norm() const noexcept { return std::sqrt(inner(*this, *this)); }

bool Matrix::all_finite() const noexcept {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (!std::isfinite((*this)(i, j))) return false;
  return true;
}

Matrix& Matrix::operator+=(const Matrix& b) {
  check_same(n_, b.n_);
  for (int k = 0; k < 9; ++k) a_[k] += b.a_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& b) {
  check_same(n_, b.n_);
  for (int k = 0; k < 9; ++k) a_[k] -= b.a_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  check_same(a.dim(), b.dim());
  const int n = a.dim();
  Matrix c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& v) {
  check_same(a.dim(), v.dim());
  Vector r(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    double s = 0.0;
    for (int k = 0; k < a.dim(); ++k) s += a(i, k) * v[k];
    r[i] = s;
  }
  return r;
}

Matrix outer(const Vector& u, const Vector& v) {
  check_same(u.dim(), v.dim());
  Matrix m(u.dim());
  for (int i = 0; i < u.dim(); ++i)
    for (int j = 0; j < v.dim(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

double inner(const Matrix& a, const Matrix& b) noexcept {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
  return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) noexcept {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

// ------------------------------------------------------------- SymMatrix

SymMatrix::SymMatrix(int n) : m_(n) {}

SymMatrix::SymMatrix(int n, std::initializer_list<double> row_major)
    : SymMatrix(from_upper(Matrix(n, row_major))) {}

SymMatrix SymMatrix::identity(int n) { return from_upper(Matrix::identity(n)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return from_upper(Matrix::diagonal(d)); }

SymMatrix SymMatrix::from_upper(const Matrix& a) {
  SymMatrix s(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) s.set(i, j, a(i, j));
  return s;
}

SymMatrix SymMatrix::symmetric_part(const Matrix& a) {
  SymMatrix s(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) s.set(i, j, 0.5 * (a(i, j) + a(j, i)));
  return s;
}

void SymMatrix::set(int i, int j, double value) noexcept {
  m_(i, j) = value;
  m_(j, i) = value;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& b) {
  m_ += b.m_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& b) {
  m_ -= b.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
SymMatrix operator-(SymMatrix a) { return a *= -1.0; }
SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

SymMatrix congruence(const Matrix& q, const SymMatrix& s) {
  return SymMatrix::symmetric_part(q * s.full() * q.transposed());
}

std::string to_string(const Matrix& a) {
  std::string out = "[";
  char buf[40];
  for (int i = 0; i < a.dim(); ++i) {
    out += i ? ", [" : "[";
    for (int j = 0; j < a.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%s%.10g", j ? ", " : "", a(i, j));
      out += buf;
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace logstrain
