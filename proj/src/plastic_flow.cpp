#include "logstrain/plastic_flow.hpp"

#include <cmath>
#include <cstdio>

#include "logstrain/tensor_kernels.hpp"

namespace logstrain {

namespace {

double dev_norm(const SymMatrix& s) { return deviatoric(s).norm(); }

KktResiduals residuals(const SymMatrix& stress, double radius, double lambda_plus) {
  const double d = dev_norm(stress);
  KktResiduals r;
  r.yield_residual = d * d - radius * radius;
  r.complementarity_residual = std::abs(lambda_plus * r.yield_residual);
  return r;
}

double multiplier(double dgamma, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  return dgamma / dt;
}

// Deviatoric stress magnitude along dev E = s N and its s-derivative. Both
// families are radial: dev D W^(E) is parallel to dev E.
double dev_stress_magnitude(const LogStrainKind& kind, double s, double* slope) {
  const double mu = kind.moduli.mu;
  if (kind.family == LogStrainFamily::QuadraticHencky) {
    if (slope) *slope = 2.0 * mu;
    return 2.0 * mu * s;
  }
  const double k = kind.moduli.k;
  const double g = std::exp(k * s * s);
  if (slope) *slope = 2.0 * mu * g * (1.0 + 2.0 * k * s * s);
  return 2.0 * mu * g * s;
}

struct LogReturn {
  bool plastic = false;
  double dgamma = 0.0;
  SymMatrix direction;
  SymMatrix e_new;
  int iterations = 0;
};

// Returns E_trial - dgamma N onto ||dev D W^(E)|| = radius. The trace of E is
// untouched, so only the scalar s = ||dev E|| has to be found.
LogReturn log_space_return(const LogStrainKind& kind, const SymMatrix& e_trial, double radius) {
  LogReturn out;
  out.e_new = e_trial;
  out.direction = SymMatrix(e_trial.dim());
  const double trial_norm = dev_norm(what_hat_stress(kind, e_trial));
  if (trial_norm <= radius) return out;

  const SymMatrix dev_e = deviatoric(e_trial);
  const double a = dev_e.norm();
  out.direction = (1.0 / a) * dev_e;
  out.plastic = true;

  double s;
  if (kind.family == LogStrainFamily::QuadraticHencky) {
    s = radius / (2.0 * kind.moduli.mu);
  } else {
    double lo = 0.0, hi = a;
    s = std::min(radius / (2.0 * kind.moduli.mu), 0.5 * a);
    double residual = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < kMaxConsistencyIterations; ++it) {
      double slope = 0.0;
      residual = dev_stress_magnitude(kind, s, &slope) - radius;
      if (std::abs(residual) <= 1e-14 * radius || hi - lo <= 4e-16 * a) {
        converged = true;
        break;
      }
      (residual > 0.0 ? hi : lo) = s;
      double next = s - residual / slope;
      if (it >= kNewtonBeforeBisection || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
      s = next;
    }
    out.iterations = it;
    if (!converged) throw NonConvergence("scalar consistency equation did not converge", residual);
  }
  out.dgamma = a - s;
  out.e_new = e_trial - out.dgamma * out.direction;
  return out;
}

EnergyModel small_strain_probe(const PathSpec& path, const SymMatrix& eps_p) {
  const Moduli& m = path.kind.moduli;
  if (path.small_strain_measure == SmallStrainMeasure::LogStretch) {
    return EnergyModel::additive_log(quadratic_hencky(m.mu, m.kappa, path.kind.n), eps_p);
  }
  return EnergyModel::small_strain(m.mu, m.lambda, eps_p);
}

}  // namespace

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::SmallStrain:
      return "small_strain";
    case Formulation::AdditiveLog:
      return "additive_log";
    case Formulation::Multiplicative:
      return "multiplicative";
  }
  return "unknown";
}

double YieldSurface::radius() const { return std::sqrt(radius_factor) * sigma_y; }

void YieldSurface::validate() const {
  if (!(sigma_y > 0.0) || !std::isfinite(sigma_y)) throw InvalidArgument("sigma_y must be > 0");
  if (!(radius_factor > 0.0) || !std::isfinite(radius_factor)) {
    throw InvalidArgument("domain radius factor must be > 0");
  }
}

YieldSurface default_yield(Formulation f, double sigma_y) {
  return YieldSurface{sigma_y, f == Formulation::Multiplicative ? kMultiplicativeRadiusFactor
                                                                : kAdditiveRadiusFactor};
}

double kkt_tolerance(const YieldSurface& yield) {
  const double r = yield.radius();
  return 1e-8 * r * r;
}

KktOutcome kkt_check(const StepResult& result, double tol) {
  char buf[160];
  if (result.lambda_plus < 0.0) {
    std::snprintf(buf, sizeof buf, "negative multiplier: lambda_plus = %.17g", result.lambda_plus);
    return {false, KktFailure::NegativeMultiplier, buf};
  }
  if (result.kkt.yield_residual > tol) {
    std::snprintf(buf, sizeof buf, "stress outside the elastic domain: yield value = %.17g",
                  result.kkt.yield_residual);
    return {false, KktFailure::OutsideDomain, buf};
  }
  if (result.kkt.complementarity_residual > tol) {
    std::snprintf(buf, sizeof buf, "complementarity violated: |lambda_plus * yield| = %.17g",
                  result.kkt.complementarity_residual);
    return {false, KktFailure::Complementarity, buf};
  }
  return {};
}

StepResult radial_return_small_strain(const SymMatrix& eps, const SmallStrainPlastic& state,
                                      double mu, double lambda, const YieldSurface& yield,
                                      double dt) {
  validate_plastic_state(state);
  yield.validate();
  if (eps.dim() != state.eps_p.dim()) throw InvalidArgument("strain and plastic strain dimensions differ");
  const int n = eps.dim();
  const double rho = yield.radius();
  auto stress_of = [&](const SymMatrix& eps_p) {
    const SymMatrix e = eps - eps_p;
    return 2.0 * mu * e + lambda * e.trace() * SymMatrix::identity(n);
  };

  StepResult r;
  r.radius = rho;
  const SymMatrix trial = stress_of(state.eps_p);
  const SymMatrix dev_trial = deviatoric(trial);
  const double a = dev_trial.norm();
  SymMatrix eps_p = state.eps_p;
  if (a > rho) {
    const double gamma = (a - rho) / (2.0 * mu);
    const SymMatrix increment = (gamma / a) * dev_trial;
    eps_p = deviatoric(state.eps_p + increment);
    r.plastic_step = true;
    r.delta_gamma = gamma;
    r.lambda_plus = multiplier(gamma, dt);
  }
  r.stress = stress_of(eps_p);
  r.dissipation = inner(r.stress, eps_p - state.eps_p);
  r.plastic = SmallStrainPlastic{eps_p};
  r.kkt = residuals(r.stress, rho, r.lambda_plus);
  return r;
}

StepResult additive_log_return_map(const Matrix& f, const AdditiveLogPlastic& state,
                                   const LogStrainKind& kind, const YieldSurface& yield,
                                   double dt) {
  validate_plastic_state(state);
  yield.validate();
  kind.validate();
  const double rho = yield.radius();
  const SymMatrix e_trial = log_stretch(f) - state.ep_log;
  const LogReturn ret = log_space_return(kind, e_trial, rho);

  StepResult r;
  r.radius = rho;
  r.iterations = ret.iterations;
  SymMatrix ep = state.ep_log;
  if (ret.plastic) {
    ep = deviatoric(state.ep_log + ret.dgamma * ret.direction);
    r.plastic_step = true;
    r.delta_gamma = ret.dgamma;
    r.lambda_plus = multiplier(ret.dgamma, dt);
  }
  r.stress = what_hat_stress(kind, ret.e_new);
  r.dissipation = inner(r.stress, ep - state.ep_log);
  r.plastic = AdditiveLogPlastic{ep};
  r.kkt = residuals(r.stress, rho, r.lambda_plus);
  r.energy = what_hat_eval(kind, ret.e_new);
  return r;
}

StepResult multiplicative_flow_step(const Matrix& f, const MultiplicativePlastic& state,
                                    const LogStrainKind& kind, const YieldSurface& yield,
                                    double dt) {
  validate_plastic_state(state);
  yield.validate();
  kind.validate();
  const double rho = yield.radius();
  const Matrix fe_trial = f * state.fp.inverse();
  // N is a function of the trial log strain, so it commutes with C_e and the
  // exponential update moves log U_e exactly along -N.
  const SymMatrix e_trial = log_stretch(fe_trial);
  const LogReturn ret = log_space_return(kind, e_trial, rho);

  StepResult r;
  r.radius = rho;
  r.iterations = ret.iterations;
  Matrix fp = state.fp;
  if (ret.plastic) {
    fp = matrix_exp_sym(ret.dgamma * ret.direction).full() * state.fp;
    r.plastic_step = true;
    r.delta_gamma = ret.dgamma;
    r.lambda_plus = multiplier(ret.dgamma, dt);
  }
  r.stress = eshelby_from_log_strain(kind, ret.e_new);
  r.dissipation = ret.plastic ? ret.dgamma * inner(r.stress, ret.direction) : 0.0;
  r.plastic = MultiplicativePlastic{fp};
  r.kkt = residuals(r.stress, rho, r.lambda_plus);
  r.energy = what_hat_eval(kind, ret.e_new);
  return r;
}

void PathSpec::validate() const {
  kind.validate();
  yield.validate();
  if (samples.empty()) throw InvalidArgument("path needs at least one sample");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const PathSample& s = samples[i];
    if (s.F.dim() != kind.n) throw InvalidArgument("path F dimension must match the model");
    if (!s.F.all_finite() || !std::isfinite(s.t)) throw InvalidArgument("path entries must be finite");
    if (i > 0 && !(s.t > samples[i - 1].t)) throw InvalidArgument("path times must be strictly increasing");
    const bool needs_orientation = formulation != Formulation::SmallStrain ||
                                   small_strain_measure == SmallStrainMeasure::LogStretch;
    if (needs_orientation && !(s.F.determinant() > 0.0)) throw OrientationError(s.F.determinant());
  }
  if (initial) {
    validate_plastic_state(*initial);
    if (dim(*initial) != kind.n) throw InvalidArgument("initial plastic state dimension mismatch");
    const bool ok = (formulation == Formulation::SmallStrain &&
                     std::holds_alternative<SmallStrainPlastic>(*initial)) ||
                    (formulation == Formulation::AdditiveLog &&
                     std::holds_alternative<AdditiveLogPlastic>(*initial)) ||
                    (formulation == Formulation::Multiplicative &&
                     std::holds_alternative<MultiplicativePlastic>(*initial));
    if (!ok) throw InvalidArgument("initial plastic state does not match the formulation");
  }
}

StepNonConvergence::StepNonConvergence(std::size_t step, const NonConvergence& inner)
    : NonConvergence("step " + std::to_string(step) + ": " + inner.what(), inner.residual()),
      step_(step) {}

EnergyModel frozen_model(const PathSpec& path, const PlasticState& state) {
  if (path.formulation == Formulation::SmallStrain) {
    return small_strain_probe(path, std::get<SmallStrainPlastic>(state).eps_p);
  }
  return EnergyModel::frozen(path.kind, state);
}

std::vector<StepResult> drive_path(const PathSpec& path, const DriveOptions& options) {
  path.validate();
  const int n = path.kind.n;
  PlasticState state = path.initial.value_or([&]() -> PlasticState {
    switch (path.formulation) {
      case Formulation::SmallStrain:
        return SmallStrainPlastic{SymMatrix(n)};
      case Formulation::AdditiveLog:
        return AdditiveLogPlastic{SymMatrix(n)};
      case Formulation::Multiplicative:
        break;
    }
    return MultiplicativePlastic{Matrix::identity(n)};
  }());

  const Moduli& m = path.kind.moduli;
  std::vector<StepResult> out;
  out.reserve(path.samples.size());
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    const PathSample& sample = path.samples[i];
    double dt = 1.0;
    if (i > 0) {
      dt = sample.t - path.samples[i - 1].t;
    } else if (path.samples.size() > 1) {
      dt = path.samples[1].t - sample.t;
    }
    StepResult r;
    try {
      switch (path.formulation) {
        case Formulation::SmallStrain: {
          const auto& s = std::get<SmallStrainPlastic>(state);
          if (path.small_strain_measure == SmallStrainMeasure::LogStretch) {
            r = radial_return_small_strain(log_stretch(sample.F), s, m.mu,
                                           m.kappa - 2.0 * m.mu / n, path.yield, dt);
          } else {
            r = radial_return_small_strain(
                SymMatrix::symmetric_part(sample.F - Matrix::identity(n)), s, m.mu, m.lambda,
                path.yield, dt);
          }
          break;
        }
        case Formulation::AdditiveLog:
          r = additive_log_return_map(sample.F, std::get<AdditiveLogPlastic>(state), path.kind,
                                      path.yield, dt);
          break;
        case Formulation::Multiplicative:
          r = multiplicative_flow_step(sample.F, std::get<MultiplicativePlastic>(state),
                                       path.kind, path.yield, dt);
          break;
      }
    } catch (const NonConvergence& e) {
      throw StepNonConvergence(i, e);
    }
    r.t = sample.t;
    state = r.plastic;
    const EnergyModel model = frozen_model(path, state);
    r.energy = energy_eval(model, sample.F);
    if (options.probe_ellipticity) r.ellipticity = rank_one_scan(model, sample.F, options.scan);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace logstrain
