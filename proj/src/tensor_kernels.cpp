#include "logstrain/tensor_kernels.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <utility>

#include "compensated.hpp"
#include "logstrain/errors.hpp"

namespace logstrain {

namespace {

using detail::DoubleDouble;
using detail::minor2;
using detail::two_prod;

void require_finite(const Matrix& a, const char* what) {
  if (!a.all_finite()) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

// First entry with magnitude above the noise floor is made positive.
void fix_sign(Vector& v) {
  for (int i = 0; i < v.dim(); ++i) {
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0.0) v = -1.0 * v;
      return;
    }
  }
}

struct Eigen2 {
  double hi, lo;  // hi >= lo
  double c, s;    // eigenvector of hi is (c, s), of lo is (-s, c)
  double r;       // half the eigenvalue spread
};

// Jacobi angle for [[a, b], [b, c]]; eigenvalues from the mean/radius form,
// the smaller-magnitude one recovered as det / larger to keep full relative
// accuracy when the matrix is nearly singular.
Eigen2 eigen2(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double d = 0.5 * (a - c);
  const double r = std::hypot(d, b);
  const double det = minor2(a, b, b, c).value();
  double hi, lo;
  if (m >= 0.0) {
    hi = m + r;
    lo = hi != 0.0 ? det / hi : 0.0;
  } else {
    lo = m - r;
    hi = lo != 0.0 ? det / lo : 0.0;
  }
  if (lo > hi) lo = hi;
  const double theta = 0.5 * std::atan2(b, d);
  return {hi, lo, std::cos(theta), std::sin(theta), r};
}

EigenDecomposition sym_eigen_2(const SymMatrix& a) {
  const Eigen2 e = eigen2(a(0, 0), a(0, 1), a(1, 1));
  Vector v1{e.c, e.s};
  Vector v2{-e.s, e.c};
  fix_sign(v1);
  fix_sign(v2);
  Matrix q(2);
  q.set_column(0, v1);
  q.set_column(1, v2);
  return {Vector{e.hi, e.lo}, q};
}

struct Invariants3 {
  DoubleDouble i1, i2, i3;
};

Invariants3 invariants3(const SymMatrix& a) {
  Invariants3 inv;
  inv.i1 = DoubleDouble{a(0, 0)} + DoubleDouble{a(1, 1)} + DoubleDouble{a(2, 2)};
  inv.i2 = minor2(a(0, 0), a(0, 1), a(1, 0), a(1, 1)) +
           minor2(a(0, 0), a(0, 2), a(2, 0), a(2, 2)) +
           minor2(a(1, 1), a(1, 2), a(2, 1), a(2, 2));
  const auto m0 = minor2(a(1, 1), a(1, 2), a(2, 1), a(2, 2));
  const auto m1 = minor2(a(1, 0), a(1, 2), a(2, 0), a(2, 2));
  const auto m2 = minor2(a(1, 0), a(1, 1), a(2, 0), a(2, 1));
  inv.i3 = m0 * a(0, 0) - m1 * a(0, 1) + m2 * a(0, 2);
  return inv;
}

// det(lambda I - A) evaluated in double-double.
double char_poly(const Invariants3& inv, double x) {
  DoubleDouble acc = DoubleDouble{x} - inv.i1;
  acc = acc * x + inv.i2;
  acc = acc * x - inv.i3;
  return acc.value();
}

// Null vector of A - lambda I from the best-conditioned row cross product.
Vector null_vector(const SymMatrix& a, double lambda) {
  Matrix m = a.full();
  for (int i = 0; i < 3; ++i) m(i, i) -= lambda;
  const Vector r0{m(0, 0), m(0, 1), m(0, 2)};
  const Vector r1{m(1, 0), m(1, 1), m(1, 2)};
  const Vector r2{m(2, 0), m(2, 1), m(2, 2)};
  const std::array<Vector, 3> candidates{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  const Vector* best = &candidates[0];
  for (const Vector& c : candidates)
    if (c.norm() > best->norm()) best = &c;
  if (best->norm() == 0.0) return Vector::unit(3, 0);
  return normalized(*best);
}

// Unit vector orthogonal to v (|v| = 1).
Vector orthogonal_unit(const Vector& v) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v[i]) < std::abs(v[axis])) axis = i;
  const Vector e = Vector::unit(3, axis);
  return normalized(e - dot(e, v) * v);
}

// Cyclic Jacobi, used when all three eigenvalues sit in one cluster and the
// cubic cannot separate them.
EigenDecomposition jacobi_3(const SymMatrix& s) {
  Matrix a = s.full();
  Matrix q = Matrix::identity(3);
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double off = std::hypot(a(0, 1), a(0, 2), a(1, 2));
    if (off <= 1e-17 * a.norm()) break;
    for (int p = 0; p < 2; ++p)
      for (int r = p + 1; r < 3; ++r) {
        if (a(p, r) == 0.0) continue;
        const double theta = 0.5 * std::atan2(2.0 * a(p, r), a(r, r) - a(p, p));
        const double c = std::cos(theta), sn = std::sin(theta);
        Matrix g = Matrix::identity(3);
        g(p, p) = c;
        g(r, r) = c;
        g(p, r) = -sn;
        g(r, p) = sn;
        a = g.transposed() * a * g;
        a(p, r) = a(r, p) = 0.0;
        q = q * g;
      }
  }
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) > a(y, y); });
  Matrix out(3);
  Vector values(3);
  for (int i = 0; i < 3; ++i) {
    Vector col = q.column(order[i]);
    fix_sign(col);
    out.set_column(i, col);
    values[i] = a(order[i], order[i]);
  }
  return {values, out};
}

EigenDecomposition sym_eigen_3(const SymMatrix& a) {
  const double m = a.trace() / 3.0;
  SymMatrix b = a - m * SymMatrix::identity(3);
  const double p2 = (b(0, 0) * b(0, 0) + b(1, 1) * b(1, 1) + b(2, 2) * b(2, 2) +
                     2.0 * (b(0, 1) * b(0, 1) + b(0, 2) * b(0, 2) + b(1, 2) * b(1, 2))) /
                    6.0;
  if (p2 == 0.0) return {Vector{m, m, m}, Matrix::identity(3)};

  const double p = std::sqrt(p2);
  const double half_det = 0.5 * ((1.0 / p) * b).determinant();
  const double phi = std::acos(std::clamp(half_det, -1.0, 1.0)) / 3.0;
  constexpr double kThird = 2.0 * std::numbers::pi / 3.0;
  std::array<double, 3> lam{m + 2.0 * p * std::cos(phi), 0.0,
                            m + 2.0 * p * std::cos(phi + kThird)};
  lam[1] = 3.0 * m - lam[0] - lam[2];
  std::sort(lam.begin(), lam.end(), std::greater<>());

  const double scale = std::max(std::abs(lam[0]), std::abs(lam[2]));
  const double tie = kRepeatedEigenvalueTol * scale;

  // Newton on the compensated characteristic polynomial; the derivative
  // uses the factored form so it stays accurate near clusters. The
  // trigonometric start of a clustered pair can be off by ~eps*|A|/gap, so a
  // few sweeps are needed.
  const Invariants3 inv = invariants3(a);
  for (int sweep = 0; sweep < 4; ++sweep) {
    std::array<double, 3> polished = lam;
    bool moved = false;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      const double gap = std::min(std::abs(lam[i] - lam[j]), std::abs(lam[i] - lam[k]));
      if (gap <= tie) continue;
      const double deriv = (lam[i] - lam[j]) * (lam[i] - lam[k]);
      const double step = char_poly(inv, lam[i]) / deriv;
      if (std::isfinite(step) && std::abs(step) < 0.25 * gap) {
        polished[i] = lam[i] - step;
        moved = moved || std::abs(step) > 4e-16 * std::abs(lam[i]);
      }
    }
    lam = polished;
    if (!moved) break;
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());

  const double gap01 = lam[0] - lam[1];
  const double gap12 = lam[1] - lam[2];
  if (gap01 <= tie && gap12 <= tie) return jacobi_3(a);

  // Solve the isolated eigenvalue directly, then the remaining pair exactly
  // as a 2x2 problem in the orthogonal complement. A double root comes out
  // of the cubic split by ~sqrt(eps), so the values are re-read from the
  // Rayleigh quotient and the 2x2 solve.
  const int iso = gap01 > gap12 ? 0 : 2;
  const Vector v = null_vector(a, lam[iso]);
  const Vector u = orthogonal_unit(v);
  const Vector w = cross(v, u);
  const Vector au = a.full() * u;
  const Vector aw = a.full() * w;
  const Eigen2 e = eigen2(dot(u, au), dot(u, aw), dot(w, aw));
  std::array<std::pair<double, Vector>, 3> pairs{
      std::pair{dot(v, a.full() * v), v},
      std::pair{e.hi, e.c * u + e.s * w},
      std::pair{e.lo, -e.s * u + e.c * w}};
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.first > y.first; });

  Matrix q(3);
  Vector values(3);
  for (int i = 0; i < 3; ++i) {
    fix_sign(pairs[i].second);
    q.set_column(i, pairs[i].second);
    values[i] = pairs[i].first;
  }
  return {values, q};
}

template <class Fn>
SymMatrix spectral_apply(const EigenDecomposition& ed, Fn fn) {
  const int n = ed.eigenvalues.dim();
  Vector d(n);
  for (int i = 0; i < n; ++i) d[i] = fn(ed.eigenvalues[i]);
  return congruence(ed.eigenvectors, SymMatrix::diagonal(d));
}

void check_positive(double lo, double hi_abs) {
  if (!(lo > kPositiveDefiniteTol * hi_abs)) throw NotPositiveDefinite(lo);
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& a) {
  require_finite(a, "sym_eigen");
  return a.dim() == 2 ? sym_eigen_2(a) : sym_eigen_3(a);
}

SymMatrix matrix_log_psym(const SymMatrix& p) {
  require_finite(p, "matrix_log_psym");
  if (p.dim() == 2) {
    // log P = alpha 1 + beta (P - m 1); beta is the divided difference of
    // log over the two eigenvalues, written with log1p for accuracy.
    const Eigen2 e = eigen2(p(0, 0), p(0, 1), p(1, 1));
    check_positive(e.lo, std::max(std::abs(e.hi), std::abs(e.lo)));
    const double alpha = 0.5 * (std::log(e.hi) + std::log(e.lo));
    const double beta = e.r > 0.0 ? std::log1p(2.0 * e.r / e.lo) / (2.0 * e.r) : 1.0 / e.lo;
    const double m = 0.5 * (p(0, 0) + p(1, 1));
    SymMatrix out(2);
    out.set(0, 0, alpha + beta * (p(0, 0) - m));
    out.set(1, 1, alpha + beta * (p(1, 1) - m));
    out.set(0, 1, beta * p(0, 1));
    return out;
  }
  const EigenDecomposition ed = sym_eigen_3(p);
  const Vector& lam = ed.eigenvalues;
  check_positive(lam[2], std::max(std::abs(lam[0]), std::abs(lam[2])));
  return spectral_apply(ed, [](double x) { return std::log(x); });
}

SymMatrix matrix_exp_sym(const SymMatrix& s) {
  require_finite(s, "matrix_exp_sym");
  if (s.dim() == 2) {
    // exp S = e^m (cosh r 1 + sinh(r)/r (S - m 1)).
    const double m = 0.5 * (s(0, 0) + s(1, 1));
    const double d = 0.5 * (s(0, 0) - s(1, 1));
    const double r = std::hypot(d, s(0, 1));
    const double em = std::exp(m);
    const double ch = std::cosh(r);
    const double sc = r < 1e-8 ? 1.0 + r * r / 6.0 : std::sinh(r) / r;
    SymMatrix out(2);
    out.set(0, 0, em * (ch + sc * d));
    out.set(1, 1, em * (ch - sc * d));
    out.set(0, 1, em * sc * s(0, 1));
    return out;
  }
  return spectral_apply(sym_eigen_3(s), [](double x) { return std::exp(x); });
}

PolarFactors polar_decompose(const Matrix& f) {
  require_finite(f, "polar_decompose");
  const double det = f.determinant();
  if (!(det > 0.0)) throw OrientationError(det);

  if (f.dim() == 2) {
    const double theta = std::atan2(f(1, 0) - f(0, 1), f(0, 0) + f(1, 1));
    const Matrix r = rotation_2d(theta);
    return {r, SymMatrix::symmetric_part(r.transposed() * f)};
  }

  // Scaled Newton iteration X <- (z X + X^{-T} / z) / 2 on the orthogonal
  // factor; the determinant scaling is dropped once the iterate is close.
  Matrix x = f;
  bool scaled = true;
  for (int iter = 0; iter < 100; ++iter) {
    const Matrix xit = x.inverse().transposed();
    const double z = scaled ? std::cbrt(1.0 / std::abs(x.determinant())) : 1.0;
    Matrix next = 0.5 * (z * x + (1.0 / z) * xit);
    const double delta = (next - x).norm();
    x = next;
    if (delta < 1e-2) scaled = false;
    if (delta < 1e-15 * 3.0) break;
    if (!scaled && delta < 1e-9) {
      // Quadratic convergence: one more step reaches working precision.
      x = 0.5 * (x + x.inverse().transposed());
      break;
    }
  }
  return {x, SymMatrix::symmetric_part(x.transposed() * f)};
}

SymMatrix deviatoric(const SymMatrix& s) {
  const double mean = s.trace() / s.dim();
  SymMatrix d = s;
  for (int i = 0; i < s.dim(); ++i) d.set(i, i, s(i, i) - mean);
  return d;
}

Matrix deviatoric(const Matrix& a) {
  const double mean = a.trace() / a.dim();
  Matrix d = a;
  for (int i = 0; i < a.dim(); ++i) d(i, i) -= mean;
  return d;
}

SymMatrix right_cauchy_green(const Matrix& f) {
  return SymMatrix::symmetric_part(f.transposed() * f);
}

Matrix rotation_2d(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Matrix(2, {c, -s, s, c});
}

Matrix rotation_3d(const Vector& axis_angle) {
  const double theta = axis_angle.norm();
  if (theta == 0.0) return Matrix::identity(3);
  const Vector k = (1.0 / theta) * axis_angle;
  const Matrix kx(3, {0.0, -k[2], k[1], k[2], 0.0, -k[0], -k[1], k[0], 0.0});
  return Matrix::identity(3) + std::sin(theta) * kx + (1.0 - std::cos(theta)) * (kx * kx);
}

}  // namespace logstrain
