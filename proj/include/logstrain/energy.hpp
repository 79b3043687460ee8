#pragma once

// Energy catalog. Every finite-strain energy is assembled from a scalar
// function of a symmetric log-strain argument (the "core" energy W^(E)),
// composed with F through log U and, optionally, a frozen plastic state.

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "logstrain/matrix.hpp"

namespace logstrain {

inline constexpr double kInfiniteEnergy = std::numeric_limits<double>::infinity();

enum class LogStrainFamily { QuadraticHencky, ExponentiatedHencky };

struct Moduli {
  double mu = 1.0;      // shear modulus
  double kappa = 1.0;   // bulk modulus; 0 selects the isochoric part alone
  double lambda = 0.0;  // first Lame constant (small-strain and SVK models)
  double k = 1.0;       // exponentiated Hencky, isochoric exponent
  double khat = 0.125;  // exponentiated Hencky, volumetric exponent
};

struct LogStrainKind {
  LogStrainFamily family = LogStrainFamily::ExponentiatedHencky;
  Moduli moduli;
  int n = 2;

  // Throws InvalidArgument on mu <= 0, kappa < 0, or non-positive exponents
  // where they are needed.
  void validate() const;
  // Parameter regimes outside the known rank-one-convex range; not errors.
  std::vector<std::string> warnings() const;
};

// Exponentiated Hencky with mu = k = 1 and no volumetric term: the energy
// e^{||dev_n log U||^2} of the simple-shear counterexample.
LogStrainKind exp_hencky_isochoric(int n = 2);
LogStrainKind quadratic_hencky(double mu, double kappa, int n);

// Plastic internal variables. Constructors of the composite models check
// the incompressibility invariants.
struct SmallStrainPlastic {
  SymMatrix eps_p;
};
struct AdditiveLogPlastic {
  SymMatrix ep_log;
};
struct MultiplicativePlastic {
  Matrix fp;
};
using PlasticState = std::variant<SmallStrainPlastic, AdditiveLogPlastic, MultiplicativePlastic>;

inline constexpr double kTracelessTol = 1e-12;
inline constexpr double kUnitDeterminantTol = 1e-10;

// Throws InvalidArgument if the state breaks its invariant.
void validate_plastic_state(const PlasticState& state);
int dim(const PlasticState& state);

class EnergyModel {
 public:
  struct Hyperelastic {
    LogStrainKind kind;
  };
  struct AdditiveLog {
    LogStrainKind kind;
    SymMatrix ep_log;
  };
  struct Multiplicative {
    LogStrainKind kind;
    Matrix fp;
    Matrix fp_inv;
  };
  struct SaintVenantKirchhoff {
    double mu;
    double lambda;
    SymMatrix ep;  // Green-Naghdi plastic strain
  };
  struct SmallStrainQuadratic {
    double mu;
    double lambda;
    SymMatrix eps_p;
  };
  using Variant =
      std::variant<Hyperelastic, AdditiveLog, Multiplicative, SaintVenantKirchhoff, SmallStrainQuadratic>;

  static EnergyModel hyperelastic(const LogStrainKind& kind);
  static EnergyModel additive_log(const LogStrainKind& kind, const SymMatrix& ep_log);
  static EnergyModel multiplicative(const LogStrainKind& kind, const Matrix& fp);
  static EnergyModel saint_venant_kirchhoff(double mu, double lambda, const SymMatrix& ep);
  static EnergyModel small_strain(double mu, double lambda, const SymMatrix& eps_p);
  // Composite of `kind` with a frozen plastic state of matching formulation:
  // small strain uses (mu, lambda) from the kind's moduli.
  static EnergyModel frozen(const LogStrainKind& kind, const PlasticState& state);

  int dim() const noexcept { return n_; }
  const Variant& variant() const noexcept { return v_; }
  std::string name() const;

 private:
  EnergyModel(Variant v, int n) : v_(std::move(v)), n_(n) {}
  Variant v_;
  int n_;
};

// Core log-strain energy and its analytic derivatives.
double what_hat_eval(const LogStrainKind& kind, const SymMatrix& e);
SymMatrix what_hat_stress(const LogStrainKind& kind, const SymMatrix& e);
// Directional derivative of what_hat_stress at e along de.
SymMatrix what_hat_tangent(const LogStrainKind& kind, const SymMatrix& e, const SymMatrix& de);

// Energy density at F. Returns kInfiniteEnergy when det F <= 0 for every
// model except SmallStrainQuadratic, which is defined for all F.
double energy_eval(const EnergyModel& model, const Matrix& f);

// log U with U from the polar decomposition; det F > 0 required.
SymMatrix log_stretch(const Matrix& f);

// Central differences of energy_eval in each entry of F, step cbrt(eps) *
// max(1, |F|). Throws BoundaryProximityError if a probe leaves det F > 0.
Matrix piola_stress_fd(const EnergyModel& model, const Matrix& f);

struct CauchyStress {
  SymMatrix sigma;
  double relative_asymmetry;  // |skew(S1 F^T)| / |S1 F^T| before symmetrizing
};
CauchyStress cauchy_stress(const EnergyModel& model, const Matrix& f);

// F_e^T D W(F_e) - W(F_e) 1 with the Piola stress from finite differences.
SymMatrix eshelby_tensor(const LogStrainKind& kind, const Matrix& fe);
// Same tensor from the log strain E = log U_e: for these isotropic energies
// F_e^T D W(F_e) equals D W^(E), so no differentiation is needed.
SymMatrix eshelby_from_log_strain(const LogStrainKind& kind, const SymMatrix& e);

// Thermodynamic driving stress of a composite at F: D W^(log U - E_p) for
// additive-log, the Eshelby tensor for multiplicative, Sigma_lin for small
// strain, D W^(log U) for hyperelastic; empty for Saint-Venant-Kirchhoff.
std::optional<SymMatrix> driving_stress(const EnergyModel& model, const Matrix& f);

enum class Toy1dFamily { HenckySquared, ExpHencky, ExpHenckyShifted };

struct Toy1d {
  Toy1dFamily family = Toy1dFamily::ExpHencky;
  double s = 1.0;  // plastic stretch of the shifted family
};

// (log t)^2, e^{(log t)^2}, e^{(log t - log s)^2}. Throws DomainError for t <= 0
// or s <= 0.
double toy1d_eval(const Toy1d& toy, double t);

}  // namespace logstrain
