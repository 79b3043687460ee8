#include "logstrain/energy.hpp"

#include <cmath>

#include "logstrain/errors.hpp"
#include "logstrain/tensor_kernels.hpp"

namespace logstrain {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(int expected, int got, const char* what) {
  if (expected != got) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                          std::to_string(expected) + " vs " + std::to_string(got) + ")");
  }
}

double squared_norm(const SymMatrix& s) { return inner(s, s); }

bool has_volumetric(const LogStrainKind& kind) { return kind.moduli.kappa != 0.0; }

}  // namespace

// ---------------------------------------------------------------- kinds

void LogStrainKind::validate() const {
  if (n != 2 && n != 3) throw InvalidArgument("n must be 2 or 3");
  if (!(moduli.mu > 0.0)) throw InvalidArgument("mu must be > 0");
  if (!(moduli.kappa >= 0.0)) throw InvalidArgument("kappa must be >= 0");
  if (family == LogStrainFamily::ExponentiatedHencky) {
    if (!(moduli.k > 0.0)) throw InvalidArgument("k must be > 0 for exponentiated Hencky");
    if (has_volumetric(*this) && !(moduli.khat > 0.0)) {
      throw InvalidArgument("khat must be > 0 when kappa > 0");
    }
  }
}

std::vector<std::string> LogStrainKind::warnings() const {
  std::vector<std::string> out;
  if (family == LogStrainFamily::ExponentiatedHencky && n == 2) {
    if (moduli.k < 0.25) out.emplace_back("k < 1/4: outside the known rank-one-convex range");
    if (has_volumetric(*this) && moduli.khat < 0.125) {
      out.emplace_back("khat < 1/8: outside the known rank-one-convex range");
    }
  }
  return out;
}

LogStrainKind exp_hencky_isochoric(int n) {
  LogStrainKind kind;
  kind.family = LogStrainFamily::ExponentiatedHencky;
  kind.moduli = Moduli{1.0, 0.0, 0.0, 1.0, 0.125};
  kind.n = n;
  return kind;
}

LogStrainKind quadratic_hencky(double mu, double kappa, int n) {
  LogStrainKind kind;
  kind.family = LogStrainFamily::QuadraticHencky;
  kind.moduli.mu = mu;
  kind.moduli.kappa = kappa;
  kind.moduli.lambda = kappa - 2.0 * mu / n;
  kind.n = n;
  return kind;
}

// ------------------------------------------------------- plastic state

void validate_plastic_state(const PlasticState& state) {
  std::visit(Overloaded{
                 [](const SmallStrainPlastic& s) {
                   if (!s.eps_p.all_finite() || std::abs(s.eps_p.trace()) > kTracelessTol) {
                     throw InvalidArgument("small-strain plastic strain must be traceless");
                   }
                 },
                 [](const AdditiveLogPlastic& s) {
                   if (!s.ep_log.all_finite() || std::abs(s.ep_log.trace()) > kTracelessTol) {
                     throw InvalidArgument("logarithmic plastic strain must be traceless");
                   }
                 },
                 [](const MultiplicativePlastic& s) {
                   if (!s.fp.all_finite() ||
                       std::abs(s.fp.determinant() - 1.0) > kUnitDeterminantTol) {
                     throw InvalidArgument("plastic distortion must have unit determinant");
                   }
                 },
             },
             state);
}

int dim(const PlasticState& state) {
  return std::visit(Overloaded{
                        [](const SmallStrainPlastic& s) { return s.eps_p.dim(); },
                        [](const AdditiveLogPlastic& s) { return s.ep_log.dim(); },
                        [](const MultiplicativePlastic& s) { return s.fp.dim(); },
                    },
                    state);
}

// ---------------------------------------------------------------- models

EnergyModel EnergyModel::hyperelastic(const LogStrainKind& kind) {
  kind.validate();
  return EnergyModel(Hyperelastic{kind}, kind.n);
}

EnergyModel EnergyModel::additive_log(const LogStrainKind& kind, const SymMatrix& ep_log) {
  kind.validate();
  require_dim(kind.n, ep_log.dim(), "additive_log");
  validate_plastic_state(AdditiveLogPlastic{ep_log});
  return EnergyModel(AdditiveLog{kind, ep_log}, kind.n);
}

EnergyModel EnergyModel::multiplicative(const LogStrainKind& kind, const Matrix& fp) {
  kind.validate();
  require_dim(kind.n, fp.dim(), "multiplicative");
  validate_plastic_state(MultiplicativePlastic{fp});
  return EnergyModel(Multiplicative{kind, fp, fp.inverse()}, kind.n);
}

EnergyModel EnergyModel::saint_venant_kirchhoff(double mu, double lambda, const SymMatrix& ep) {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be > 0");
  if (!std::isfinite(lambda) || !ep.all_finite()) throw InvalidArgument("non-finite SVK input");
  return EnergyModel(SaintVenantKirchhoff{mu, lambda, ep}, ep.dim());
}

EnergyModel EnergyModel::small_strain(double mu, double lambda, const SymMatrix& eps_p) {
  if (!(mu > 0.0)) throw InvalidArgument("mu must be > 0");
  if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
  validate_plastic_state(SmallStrainPlastic{eps_p});
  return EnergyModel(SmallStrainQuadratic{mu, lambda, eps_p}, eps_p.dim());
}

EnergyModel EnergyModel::frozen(const LogStrainKind& kind, const PlasticState& state) {
  return std::visit(Overloaded{
                        [&](const SmallStrainPlastic& s) {
                          return small_strain(kind.moduli.mu, kind.moduli.lambda, s.eps_p);
                        },
                        [&](const AdditiveLogPlastic& s) { return additive_log(kind, s.ep_log); },
                        [&](const MultiplicativePlastic& s) { return multiplicative(kind, s.fp); },
                    },
                    state);
}

std::string EnergyModel::name() const {
  return std::visit(Overloaded{
                        [](const Hyperelastic&) { return std::string("hyperelastic"); },
                        [](const AdditiveLog&) { return std::string("additive_log"); },
                        [](const Multiplicative&) { return std::string("multiplicative"); },
                        [](const SaintVenantKirchhoff&) {
                          return std::string("saint_venant_kirchhoff");
                        },
                        [](const SmallStrainQuadratic&) { return std::string("small_strain"); },
                    },
                    v_);
}

// ------------------------------------------------------------ core energy

double what_hat_eval(const LogStrainKind& kind, const SymMatrix& e) {
  require_dim(kind.n, e.dim(), "what_hat_eval");
  const Moduli& m = kind.moduli;
  const double dev2 = squared_norm(deviatoric(e));
  const double tr = e.trace();
  if (kind.family == LogStrainFamily::QuadraticHencky) {
    return m.mu * dev2 + 0.5 * m.kappa * tr * tr;
  }
  double w = (m.mu / m.k) * std::exp(m.k * dev2);
  if (has_volumetric(kind)) w += (m.kappa / (2.0 * m.khat)) * std::exp(m.khat * tr * tr);
  return w;
}

SymMatrix what_hat_stress(const LogStrainKind& kind, const SymMatrix& e) {
  require_dim(kind.n, e.dim(), "what_hat_stress");
  const Moduli& m = kind.moduli;
  const SymMatrix dev = deviatoric(e);
  const double tr = e.trace();
  const SymMatrix one = SymMatrix::identity(e.dim());
  if (kind.family == LogStrainFamily::QuadraticHencky) {
    return 2.0 * m.mu * dev + m.kappa * tr * one;
  }
  SymMatrix s = (2.0 * m.mu * std::exp(m.k * squared_norm(dev))) * dev;
  if (has_volumetric(kind)) s += (m.kappa * std::exp(m.khat * tr * tr) * tr) * one;
  return s;
}

SymMatrix what_hat_tangent(const LogStrainKind& kind, const SymMatrix& e, const SymMatrix& de) {
  require_dim(kind.n, e.dim(), "what_hat_tangent");
  const Moduli& m = kind.moduli;
  const SymMatrix one = SymMatrix::identity(e.dim());
  const SymMatrix ddev = deviatoric(de);
  const double dtr = de.trace();
  if (kind.family == LogStrainFamily::QuadraticHencky) {
    return 2.0 * m.mu * ddev + m.kappa * dtr * one;
  }
  const SymMatrix dev = deviatoric(e);
  const double tr = e.trace();
  const double g = std::exp(m.k * squared_norm(dev));
  SymMatrix t = (2.0 * m.mu * g) * (ddev + (2.0 * m.k * inner(dev, ddev)) * dev);
  if (has_volumetric(kind)) {
    t += (m.kappa * std::exp(m.khat * tr * tr) * (1.0 + 2.0 * m.khat * tr * tr) * dtr) * one;
  }
  return t;
}

// ------------------------------------------------------------ F-level

SymMatrix log_stretch(const Matrix& f) { return matrix_log_psym(polar_decompose(f).U); }

double energy_eval(const EnergyModel& model, const Matrix& f) {
  require_dim(model.dim(), f.dim(), "energy_eval");
  const int n = f.dim();
  if (const auto* ss = std::get_if<EnergyModel::SmallStrainQuadratic>(&model.variant())) {
    const SymMatrix e = SymMatrix::symmetric_part(f - Matrix::identity(n)) - ss->eps_p;
    const double tr = e.trace();
    return ss->mu * squared_norm(e) + 0.5 * ss->lambda * tr * tr;
  }
  if (!(f.determinant() > 0.0)) return kInfiniteEnergy;

  return std::visit(
      Overloaded{
          [&](const EnergyModel::Hyperelastic& m) { return what_hat_eval(m.kind, log_stretch(f)); },
          [&](const EnergyModel::AdditiveLog& m) {
            return what_hat_eval(m.kind, log_stretch(f) - m.ep_log);
          },
          [&](const EnergyModel::Multiplicative& m) {
            return what_hat_eval(m.kind, log_stretch(f * m.fp_inv));
          },
          [&](const EnergyModel::SaintVenantKirchhoff& m) {
            const SymMatrix e =
                0.5 * (right_cauchy_green(f) - SymMatrix::identity(n)) - m.ep;
            const double tr = e.trace();
            return 0.25 * m.mu * squared_norm(e) + 0.125 * m.lambda * tr * tr;
          },
          [&](const EnergyModel::SmallStrainQuadratic&) { return 0.0; },
      },
      model.variant());
}

Matrix piola_stress_fd(const EnergyModel& model, const Matrix& f) {
  require_dim(model.dim(), f.dim(), "piola_stress_fd");
  const bool small = std::holds_alternative<EnergyModel::SmallStrainQuadratic>(model.variant());
  if (!small && !(f.determinant() > 0.0)) throw OrientationError(f.determinant());
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, f.norm());
  const int n = f.dim();
  Matrix s(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix fp = f, fm = f;
      fp(i, j) += h;
      fm(i, j) -= h;
      const double wp = energy_eval(model, fp);
      const double wm = energy_eval(model, fm);
      if (!std::isfinite(wp) || !std::isfinite(wm)) {
        throw BoundaryProximityError("finite-difference probe crossed det F <= 0");
      }
      s(i, j) = (wp - wm) / (2.0 * h);
    }
  }
  return s;
}

CauchyStress cauchy_stress(const EnergyModel& model, const Matrix& f) {
  const Matrix s1 = piola_stress_fd(model, f);
  const double j = f.determinant();
  if (!(j > 0.0)) throw OrientationError(j);
  const Matrix p = (1.0 / j) * (s1 * f.transposed());
  const double pn = p.norm();
  const double asym = pn > 0.0 ? 0.5 * (p - p.transposed()).norm() / pn : 0.0;
  return {SymMatrix::symmetric_part(p), asym};
}

SymMatrix eshelby_tensor(const LogStrainKind& kind, const Matrix& fe) {
  require_dim(kind.n, fe.dim(), "eshelby_tensor");
  if (!(fe.determinant() > 0.0)) throw OrientationError(fe.determinant());
  const EnergyModel model = EnergyModel::hyperelastic(kind);
  const Matrix s1 = piola_stress_fd(model, fe);
  const double w = energy_eval(model, fe);
  return SymMatrix::symmetric_part(fe.transposed() * s1 - w * Matrix::identity(fe.dim()));
}

SymMatrix eshelby_from_log_strain(const LogStrainKind& kind, const SymMatrix& e) {
  return what_hat_stress(kind, e) - what_hat_eval(kind, e) * SymMatrix::identity(e.dim());
}

std::optional<SymMatrix> driving_stress(const EnergyModel& model, const Matrix& f) {
  require_dim(model.dim(), f.dim(), "driving_stress");
  const int n = f.dim();
  if (const auto* ss = std::get_if<EnergyModel::SmallStrainQuadratic>(&model.variant())) {
    const SymMatrix e = SymMatrix::symmetric_part(f - Matrix::identity(n)) - ss->eps_p;
    return 2.0 * ss->mu * e + ss->lambda * e.trace() * SymMatrix::identity(n);
  }
  if (!(f.determinant() > 0.0)) throw OrientationError(f.determinant());
  return std::visit(
      Overloaded{
          [&](const EnergyModel::Hyperelastic& m) -> std::optional<SymMatrix> {
            return what_hat_stress(m.kind, log_stretch(f));
          },
          [&](const EnergyModel::AdditiveLog& m) -> std::optional<SymMatrix> {
            return what_hat_stress(m.kind, log_stretch(f) - m.ep_log);
          },
          [&](const EnergyModel::Multiplicative& m) -> std::optional<SymMatrix> {
            return eshelby_from_log_strain(m.kind, log_stretch(f * m.fp_inv));
          },
          [&](const EnergyModel::SaintVenantKirchhoff&) -> std::optional<SymMatrix> {
            return std::nullopt;
          },
          [&](const EnergyModel::SmallStrainQuadratic&) -> std::optional<SymMatrix> {
            return std::nullopt;
          },
      },
      model.variant());
}

double toy1d_eval(const Toy1d& toy, double t) {
  if (!(t > 0.0)) throw DomainError("toy energy requires t > 0");
  const double lt = std::log(t);
  switch (toy.family) {
    case Toy1dFamily::HenckySquared:
      return lt * lt;
    case Toy1dFamily::ExpHencky:
      return std::exp(lt * lt);
    case Toy1dFamily::ExpHenckyShifted: {
      if (!(toy.s > 0.0)) throw DomainError("plastic stretch s must be > 0");
      const double d = lt - std::log(toy.s);
      return std::exp(d * d);
    }
  }
  return 0.0;
}

}  // namespace logstrain
