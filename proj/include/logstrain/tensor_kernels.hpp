#pragma once

// Spectral kernels for 2x2 and 3x3 real matrices: symmetric eigensystems,
// principal log/exp of symmetric matrices, polar decomposition, deviatoric
// projection. All functions are pure and thread-safe.

#include "logstrain/matrix.hpp"

namespace logstrain {

struct EigenDecomposition {
  Vector eigenvalues;  // descending
  Matrix eigenvectors; // column i pairs with eigenvalues[i]
};

struct PolarFactors {
  Matrix R;     // proper rotation
  SymMatrix U;  // right stretch, positive definite
};

// Relative gap below which two eigenvalues are treated as one eigenspace.
inline constexpr double kRepeatedEigenvalueTol = 1e-10;

// Positive-definiteness floor relative to the largest eigenvalue magnitude.
inline constexpr double kPositiveDefiniteTol = 1e-12;

// Closed form for n = 2; trigonometric cubic with a compensated Newton polish
// for n = 3. Eigenvectors have their first non-negligible component positive.
EigenDecomposition sym_eigen(const SymMatrix& a);

// Principal logarithm. Throws NotPositiveDefinite if any eigenvalue is at or
// below kPositiveDefiniteTol * max|lambda|.
SymMatrix matrix_log_psym(const SymMatrix& p);

SymMatrix matrix_exp_sym(const SymMatrix& s);

// F = R U with R in SO(n). Throws OrientationError when det F <= 0.
PolarFactors polar_decompose(const Matrix& f);

SymMatrix deviatoric(const SymMatrix& s);
Matrix deviatoric(const Matrix& a);

// Right Cauchy-Green tensor F^T F.
SymMatrix right_cauchy_green(const Matrix& f);

// Draws used by property tests and randomized scans live with the caller;
// this helper only builds a rotation from an angle (n = 2) or a rotation
// vector (n = 3, Rodrigues formula).
Matrix rotation_2d(double angle);
Matrix rotation_3d(const Vector& axis_angle);

}  // namespace logstrain
