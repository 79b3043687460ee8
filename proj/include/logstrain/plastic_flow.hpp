#pragma once

// Strain-driven integrators for perfect plasticity with a deviatoric-norm
// yield criterion, in three formulations: small-strain additive, additive
// logarithmic, and multiplicative with Eshelby driving stress.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "logstrain/ellipticity.hpp"
#include "logstrain/energy.hpp"
#include "logstrain/errors.hpp"
#include "logstrain/matrix.hpp"

namespace logstrain {

enum class Formulation { SmallStrain, AdditiveLog, Multiplicative };

std::string to_string(Formulation f);

// Factor c in ||dev Sigma||^2 <= c sigma_y^2. The multiplicative domain is
// printed both ways, so the factor is a parameter.
inline constexpr double kAdditiveRadiusFactor = 2.0 / 3.0;
inline constexpr double kMultiplicativeRadiusFactor = 1.0 / 3.0;

struct YieldSurface {
  double sigma_y = 1.0;
  double radius_factor = kAdditiveRadiusFactor;

  double radius() const;  // sqrt(radius_factor) * sigma_y
  void validate() const;  // sigma_y > 0, radius_factor > 0
};

YieldSurface default_yield(Formulation f, double sigma_y);

// 1e-8 * radius^2.
double kkt_tolerance(const YieldSurface& yield);

struct KktResiduals {
  double yield_residual = 0.0;            // ||dev Sigma||^2 - radius^2
  double complementarity_residual = 0.0;  // |lambda_plus * yield_residual|
};

struct StepResult {
  double t = 0.0;
  SymMatrix stress;      // Sigma_lin, D W^(log U - E_p) or Sigma_E
  PlasticState plastic;  // state after the step
  double lambda_plus = 0.0;
  double delta_gamma = 0.0;
  double radius = 0.0;
  bool plastic_step = false;
  KktResiduals kkt;
  double dissipation = 0.0;  // <Sigma, delta E_p>
  double energy = 0.0;       // frozen-state energy at the step's F
  int iterations = 0;        // scalar consistency solver iterations
  std::optional<EllipticityReport> ellipticity;
};

enum class KktFailure { None, NegativeMultiplier, OutsideDomain, Complementarity };

struct KktOutcome {
  bool pass = true;
  KktFailure failure = KktFailure::None;
  std::string details;
};

KktOutcome kkt_check(const StepResult& result, double tol);

inline constexpr int kMaxConsistencyIterations = 100;
inline constexpr int kNewtonBeforeBisection = 25;

// Closed-form radial return for Sigma = 2 mu (eps - eps_p) + lambda tr(eps - eps_p) 1.
StepResult radial_return_small_strain(const SymMatrix& eps, const SmallStrainPlastic& state,
                                      double mu, double lambda, const YieldSurface& yield,
                                      double dt);

// Backward Euler in log-strain space on E = log U - E_p.
StepResult additive_log_return_map(const Matrix& f, const AdditiveLogPlastic& state,
                                   const LogStrainKind& kind, const YieldSurface& yield,
                                   double dt);

// Exponential update F_p <- exp(dgamma N) F_p with N the Eshelby flow
// direction at the returned state.
StepResult multiplicative_flow_step(const Matrix& f, const MultiplicativePlastic& state,
                                    const LogStrainKind& kind, const YieldSurface& yield,
                                    double dt);

// Small-strain model fed with either sym(F - 1) or log U.
enum class SmallStrainMeasure { DisplacementGradient, LogStretch };

struct PathSample {
  double t;
  Matrix F;
};

struct PathSpec {
  Formulation formulation = Formulation::AdditiveLog;
  LogStrainKind kind;
  YieldSurface yield;
  std::vector<PathSample> samples;
  SmallStrainMeasure small_strain_measure = SmallStrainMeasure::DisplacementGradient;
  std::optional<PlasticState> initial;  // zero plastic strain / identity otherwise

  void validate() const;
};

struct DriveOptions {
  bool probe_ellipticity = false;
  ScanOptions scan;
};

// Thrown by drive_path when a step's consistency solve fails.
class StepNonConvergence : public NonConvergence {
 public:
  StepNonConvergence(std::size_t step, const NonConvergence& inner);
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

std::vector<StepResult> drive_path(const PathSpec& path, const DriveOptions& options = {});

// Energy model of the path's formulation frozen at `state`.
EnergyModel frozen_model(const PathSpec& path, const PlasticState& state);

}  // namespace logstrain
