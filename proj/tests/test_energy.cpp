#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "logstrain/energy.hpp"
#include "logstrain/errors.hpp"
#include "logstrain/tensor_kernels.hpp"
#include "support/sampling.hpp"

using namespace logstrain;
using logstrain::testing::Sampler;

namespace {

const double kE8 = std::exp(8.0);

LogStrainKind exp_hencky(double mu, double kappa, double k, double khat, int n) {
  LogStrainKind kind;
  kind.family = LogStrainFamily::ExponentiatedHencky;
  kind.moduli.mu = mu;
  kind.moduli.kappa = kappa;
  kind.moduli.k = k;
  kind.moduli.khat = khat;
  kind.n = n;
  return kind;
}

double relative(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Central difference of what_hat_eval in the symmetric direction of entry (i,j).
SymMatrix fd_what_hat_stress(const LogStrainKind& kind, const SymMatrix& e, double h) {
  const int n = e.dim();
  SymMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      SymMatrix p = e, m = e;
      p.set(i, j, e(i, j) + h);
      m.set(i, j, e(i, j) - h);
      const double d = (what_hat_eval(kind, p) - what_hat_eval(kind, m)) / (2.0 * h);
      g.set(i, j, i == j ? d : d / 2.0);
    }
  return g;
}

}  // namespace

TEST(WhatHat, Examples) {
  const LogStrainKind iso = exp_hencky_isochoric(2);
  EXPECT_DOUBLE_EQ(what_hat_eval(iso, SymMatrix(2)), 1.0);
  EXPECT_NEAR(what_hat_eval(iso, SymMatrix(2, {-2, 0, 0, 2})), kE8, 1e-9 * kE8);
  EXPECT_NEAR(what_hat_eval(iso, SymMatrix(2, {-2, 0, 0, 2})), 2980.958, 1e-3);
  EXPECT_DOUBLE_EQ(what_hat_eval(quadratic_hencky(1.0, 2.0, 3), SymMatrix::identity(3)), 9.0);
  // Volumetric exponential adds kappa / (2 khat) at zero trace.
  EXPECT_DOUBLE_EQ(what_hat_eval(exp_hencky(1.0, 1.0, 1.0, 0.125, 2), SymMatrix(2)), 1.0 + 4.0);
}

TEST(WhatHat, StressExamples) {
  for (const LogStrainKind& kind : {exp_hencky_isochoric(2), quadratic_hencky(1.0, 1.0, 2),
                                    exp_hencky(2.0, 3.0, 0.5, 0.25, 3)})
    EXPECT_EQ(what_hat_stress(kind, SymMatrix(kind.n)).norm(), 0.0);
  const SymMatrix e(2, {-2, 0, 0, 2});
  EXPECT_LE(max_abs_diff(what_hat_stress(quadratic_hencky(1.0, 1.0, 2), e), 2.0 * e), 1e-15);
  const SymMatrix s = what_hat_stress(exp_hencky_isochoric(2), e);
  EXPECT_LE((s - 2.0 * kE8 * e).norm(), 1e-12 * s.norm());
  const SymMatrix fd = fd_what_hat_stress(exp_hencky_isochoric(2), e, 1e-5);
  EXPECT_LE((s - fd).norm(), 1e-6 * s.norm());
}

TEST(WhatHat, StressMatchesFiniteDifferences) {
  Sampler rng(21);
  for (int i = 0; i < 500; ++i) {
    const int n = 2 + i % 2;
    SymMatrix e = rng.symmetric(n, 1.0);
    e = rng.uniform(0.0, 3.0) / std::max(e.norm(), 1e-300) * e;
    const LogStrainKind kind = i % 3 == 0 ? quadratic_hencky(rng.uniform(0.5, 2), rng.uniform(0.5, 2), n)
                                          : exp_hencky(rng.uniform(0.5, 2), rng.uniform(0, 2), rng.uniform(0.25, 1),
                                                       rng.uniform(0.125, 0.5), n);
    const SymMatrix s = what_hat_stress(kind, e);
    const SymMatrix fd = fd_what_hat_stress(kind, e, 1e-6 * std::max(1.0, e.norm()));
    EXPECT_LE((s - fd).norm(), 1e-6 * std::max(1.0, s.norm())) << i;
  }
}

TEST(WhatHat, TangentMatchesStressDifferences) {
  Sampler rng(22);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 2;
    const LogStrainKind kind = exp_hencky(1.0, 1.0, 0.5, 0.25, n);
    const SymMatrix e = rng.symmetric(n, 0.5);
    const SymMatrix de = rng.symmetric(n, 1.0);
    const double h = 1e-6;
    const SymMatrix fd = (1.0 / (2.0 * h)) * (what_hat_stress(kind, e + h * de) - what_hat_stress(kind, e - h * de));
    const SymMatrix t = what_hat_tangent(kind, e, de);
    EXPECT_LE((t - fd).norm(), 1e-6 * std::max(1.0, t.norm()));
  }
}

TEST(EnergyEval, CompositeExamples) {
  const LogStrainKind iso = exp_hencky_isochoric(2);
  EXPECT_DOUBLE_EQ(energy_eval(EnergyModel::additive_log(iso, SymMatrix(2)), Matrix::identity(2)), 1.0);
  EXPECT_NEAR(energy_eval(EnergyModel::additive_log(iso, SymMatrix(2, {-2, 0, 0, 2})), Matrix::identity(2)), kE8,
              1e-9 * kE8);
  const double e = std::exp(1.0);
  const Matrix fp = Matrix::diagonal(Vector{1.0 / e, e});
  EXPECT_NEAR(energy_eval(EnergyModel::multiplicative(iso, fp), fp), 1.0, 1e-14);
}

TEST(EnergyEval, SaintVenantKirchhoffClosedForm) {
  const double mu = 1.5, lambda = 0.7;
  const EnergyModel svk = EnergyModel::saint_venant_kirchhoff(mu, lambda, SymMatrix(2));
  // E = (C - 1)/2 = diag(1.5, 0)
  EXPECT_NEAR(energy_eval(svk, Matrix::diagonal(Vector{2.0, 1.0})), mu / 4 * 2.25 + lambda / 8 * 2.25, 1e-14);
}

TEST(EnergyEval, InfiniteOutsideOrientationPreserving) {
  const Matrix flip = Matrix::diagonal(Vector{-1.0, 1.0});
  EXPECT_EQ(energy_eval(EnergyModel::hyperelastic(exp_hencky_isochoric(2)), flip), kInfiniteEnergy);
  EXPECT_EQ(energy_eval(EnergyModel::additive_log(quadratic_hencky(1, 1, 2), SymMatrix(2)), Matrix(2)),
            kInfiniteEnergy);
  EXPECT_EQ(energy_eval(EnergyModel::saint_venant_kirchhoff(1, 1, SymMatrix(2)), flip), kInfiniteEnergy);
  // sym(F - 1) = diag(-2, 0): mu * 4 + lambda / 2 * 4
  EXPECT_DOUBLE_EQ(energy_eval(EnergyModel::small_strain(1.0, 1.0, SymMatrix(2)), flip), 6.0);
}

TEST(EnergyEval, ObjectiveAndIsotropic) {
  Sampler rng(23);
  for (int i = 0; i < 2000; ++i) {
    const int n = 2 + i % 2;
    const LogStrainKind kind = i % 2 ? quadratic_hencky(1.0, 2.0, n) : exp_hencky(1.0, 1.0, 0.5, 0.25, n);
    const EnergyModel model = EnergyModel::hyperelastic(kind);
    const Matrix f = rng.deformation(n, 0.3, 3.0);
    const Matrix q1 = rng.rotation(n), q2 = rng.rotation(n);
    const double w = energy_eval(model, f);
    EXPECT_LE(relative(energy_eval(model, q1.transposed() * f * q2), w), 1e-10);
  }
}

TEST(EnergyEval, CoaxialAdditiveEqualsMultiplicative) {
  Sampler rng(24);
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 2;
    const LogStrainKind kind = i % 2 ? quadratic_hencky(1.0, 1.5, n) : exp_hencky(1.0, 1.0, 0.5, 0.25, n);
    const Matrix q = rng.rotation(n);
    const SymMatrix c = congruence(q, SymMatrix::diagonal(rng.log_uniform_vector(n, 0.2, 5.0)));
    // det Cp = 1 so that log Up is traceless.
    Vector p = rng.log_uniform_vector(n, 0.2, 5.0);
    double logdet = 0;
    for (int k = 0; k < n; ++k) logdet += std::log(p[k]);
    for (int k = 0; k < n; ++k) p[k] = std::exp(std::log(p[k]) - logdet / n);
    const SymMatrix cp = congruence(q, SymMatrix::diagonal(p));
    const Matrix f = rng.rotation(n) * matrix_exp_sym(0.5 * matrix_log_psym(c)).full();
    const Matrix fp = rng.rotation(n) * matrix_exp_sym(0.5 * matrix_log_psym(cp)).full();
    const SymMatrix ep = deviatoric(0.5 * matrix_log_psym(cp));
    const double wa = energy_eval(EnergyModel::additive_log(kind, ep), f);
    const double wm = energy_eval(EnergyModel::multiplicative(kind, fp), f);
    EXPECT_LE(relative(wm, wa), 1e-9) << wa << " " << wm;
  }
}

TEST(EnergyEval, MultiplicativeDependsOnEigenvaluesOfCCpInverse) {
  Sampler rng(25);
  const LogStrainKind kind = exp_hencky(1.0, 1.0, 0.5, 0.25, 2);
  for (int i = 0; i < 1000; ++i) {
    const Matrix f = rng.deformation(2, 0.3, 3.0);
    const Matrix fp = rng.unimodular(2, 20.0);
    // Eigenvalues of the non-symmetric product from its trace and determinant.
    const Matrix m = f.transposed() * f * (fp.transposed() * fp).inverse();
    const double tr = m.trace(), det = m.determinant();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double l1 = (tr + disc) / 2.0, l2 = det / l1;
    const double oracle = what_hat_eval(kind, SymMatrix::diagonal(Vector{0.5 * std::log(l1), 0.5 * std::log(l2)}));
    EXPECT_LE(relative(energy_eval(EnergyModel::multiplicative(kind, fp), f), oracle), 1e-9);
  }
}

TEST(PiolaStress, Examples) {
  EXPECT_LE(piola_stress_fd(EnergyModel::hyperelastic(quadratic_hencky(1, 1, 2)), Matrix::identity(2)).norm(), 1e-9);

  const double mu = 1.3, lambda = 0.4, eps = 1e-3;
  Matrix f = Matrix::identity(3);
  f(0, 0) += eps;
  const Matrix s = piola_stress_fd(EnergyModel::small_strain(mu, lambda, SymMatrix(3)), f);
  EXPECT_NEAR(s(0, 0), 2 * mu * eps + lambda * eps, 1e-8);

  // W(diag(a, b)) = e^{(log a - log b)^2 / 2} for eH iso.
  const double a = 2.0, b = 0.5, d = std::log(a) - std::log(b);
  const Matrix se = piola_stress_fd(EnergyModel::hyperelastic(exp_hencky_isochoric(2)), Matrix::diagonal(Vector{a, b}));
  const double s11 = std::exp(d * d / 2) * d / a, s22 = -std::exp(d * d / 2) * d / b;
  EXPECT_LE(std::abs(se(0, 0) - s11), 1e-6 * std::abs(s11));
  EXPECT_LE(std::abs(se(1, 1) - s22), 1e-6 * std::abs(s22));
  EXPECT_LE(std::abs(se(0, 1)) + std::abs(se(1, 0)), 1e-6 * std::abs(s11));
}

TEST(PiolaStress, NearBoundaryThrows) {
  const EnergyModel m = EnergyModel::hyperelastic(quadratic_hencky(1, 1, 2));
  EXPECT_THROW(piola_stress_fd(m, Matrix::diagonal(Vector{1.0, 1e-7})), BoundaryProximityError);
  EXPECT_THROW(piola_stress_fd(m, Matrix::diagonal(Vector{1.0, -1.0})), OrientationError);
}

TEST(CauchyStress, Examples) {
  EXPECT_LE(cauchy_stress(EnergyModel::hyperelastic(exp_hencky_isochoric(2)), Matrix::identity(2)).sigma.norm(), 1e-9);

  const double kappa = 1.7, c = 0.3;
  const CauchyStress dil =
      cauchy_stress(EnergyModel::hyperelastic(quadratic_hencky(1.0, kappa, 2)), std::exp(c) * Matrix::identity(2));
  const double expected = 2 * kappa * c * std::exp(-2 * c);
  EXPECT_NEAR(dil.sigma(0, 0), expected, 1e-8);
  EXPECT_NEAR(dil.sigma(1, 1), expected, 1e-8);
  EXPECT_NEAR(dil.sigma(0, 1), 0.0, 1e-8);

  const CauchyStress shear =
      cauchy_stress(EnergyModel::hyperelastic(exp_hencky_isochoric(2)), Matrix(2, {1, 1, 0, 1}));
  EXPECT_LE(std::abs(shear.sigma.trace()), 1e-8);
  EXPECT_LE(shear.relative_asymmetry, 1e-6);
}

TEST(Eshelby, Examples) {
  const LogStrainKind kind = exp_hencky(1.0, 0.5, 1.0, 0.125, 2);
  const SymMatrix id = eshelby_tensor(kind, Matrix::identity(2));
  const double w = 1.0 + 0.5 / (2 * 0.125);
  EXPECT_LE(max_abs_diff(id, -w * SymMatrix::identity(2)), 1e-9);

  const double e = std::exp(1.0);
  // E = diag(1, -1): W = 2, D W = diag(2, -2).
  const SymMatrix qh = eshelby_tensor(quadratic_hencky(1.0, 3.0, 2), Matrix::diagonal(Vector{e, 1 / e}));
  EXPECT_LE(max_abs_diff(qh, SymMatrix::diagonal(Vector{0.0, -4.0})), 1e-8);
}

TEST(Eshelby, ObjectiveAndMatchesLogStrainForm) {
  Sampler rng(26);
  for (int i = 0; i < 300; ++i) {
    const int n = 2 + i % 2;
    const LogStrainKind kind = exp_hencky(1.0, 1.0, 0.5, 0.25, n);
    const Matrix fe = rng.deformation(n, 0.5, 2.0);
    const SymMatrix s = eshelby_tensor(kind, fe);
    const double scale = std::max(1.0, s.norm());
    EXPECT_LE((eshelby_tensor(kind, rng.rotation(n) * fe) - s).norm(), 1e-7 * scale);
    EXPECT_LE((eshelby_from_log_strain(kind, log_stretch(fe)) - s).norm(), 1e-7 * scale);
  }
}

TEST(DrivingStress, SmallStrainShiftIsLinearInPlasticStrain) {
  Sampler rng(27);
  const double mu = 1.1, lambda = 0.6;
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + i % 2;
    const SymMatrix ep = rng.traceless(n, 0.5);
    Matrix f = Matrix::identity(n) + 0.1 * rng.symmetric(n, 1.0).full();
    const SymMatrix s0 = *driving_stress(EnergyModel::small_strain(mu, lambda, SymMatrix(n)), f);
    const SymMatrix s1 = *driving_stress(EnergyModel::small_strain(mu, lambda, ep), f);
    const SymMatrix shift = -2 * mu * ep - lambda * ep.trace() * SymMatrix::identity(n);
    EXPECT_LE((s1 - s0 - shift).norm(), 1e-14 * std::max(1.0, s0.norm()));
  }
  EXPECT_FALSE(driving_stress(EnergyModel::saint_venant_kirchhoff(1, 1, SymMatrix(2)), Matrix::identity(2)));
}

TEST(Toy1d, ValuesAndDomain) {
  EXPECT_EQ(toy1d_eval({Toy1dFamily::HenckySquared, 1.0}, 1.0), 0.0);
  EXPECT_NEAR(toy1d_eval({Toy1dFamily::ExpHencky, 1.0}, std::exp(1.0)), 2.718282, 1e-6);
  EXPECT_DOUBLE_EQ(toy1d_eval({Toy1dFamily::ExpHenckyShifted, 3.5}, 3.5), 1.0);
  EXPECT_THROW(toy1d_eval({Toy1dFamily::ExpHencky, 1.0}, 0.0), DomainError);
  EXPECT_THROW(toy1d_eval({Toy1dFamily::ExpHencky, 1.0}, -1.0), DomainError);
  EXPECT_THROW(toy1d_eval({Toy1dFamily::ExpHenckyShifted, 0.0}, 1.0), DomainError);
}

TEST(Toy1d, ConvexityOfExponentiatedFamilies) {
  auto min_second_difference = [](const Toy1d& toy) {
    double worst = INFINITY;
    const double h = 1e-3;
    for (double t = 0.05; t <= 20.0; t += 0.01) {
      const double d2 = (toy1d_eval(toy, t + h) - 2 * toy1d_eval(toy, t) + toy1d_eval(toy, t - h)) / (h * h);
      worst = std::min(worst, d2);
    }
    return worst;
  };
  EXPECT_GE(min_second_difference({Toy1dFamily::ExpHencky, 1.0}), -1e-8);
  for (double s : {0.1, 1.0, 10.0}) EXPECT_GE(min_second_difference({Toy1dFamily::ExpHenckyShifted, s}), -1e-8);
  EXPECT_LT(min_second_difference({Toy1dFamily::HenckySquared, 1.0}), 0.0);
}

TEST(Validation, RejectsBadModuliAndPlasticStates) {
  LogStrainKind bad = quadratic_hencky(0.0, 1.0, 2);
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = quadratic_hencky(1.0, -1.0, 2);
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_THROW(validate_plastic_state(AdditiveLogPlastic{SymMatrix::diagonal(Vector{0.1, 0.0})}), InvalidArgument);
  EXPECT_THROW(validate_plastic_state(SmallStrainPlastic{SymMatrix::identity(3)}), InvalidArgument);
  EXPECT_THROW(validate_plastic_state(MultiplicativePlastic{Matrix::diagonal(Vector{2.0, 1.0})}), InvalidArgument);
  EXPECT_NO_THROW(validate_plastic_state(MultiplicativePlastic{Matrix::diagonal(Vector{2.0, 0.5})}));
  EXPECT_THROW(EnergyModel::additive_log(exp_hencky_isochoric(2), SymMatrix::identity(2)), InvalidArgument);
}

TEST(Validation, WarnsOutsideConvexRegime) {
  EXPECT_TRUE(exp_hencky(1.0, 1.0, 1.0, 0.125, 2).warnings().empty());
  EXPECT_FALSE(exp_hencky(1.0, 1.0, 0.1, 0.125, 2).warnings().empty());
  EXPECT_FALSE(exp_hencky(1.0, 1.0, 1.0, 0.05, 2).warnings().empty());
}
