#pragma once

// Sampling-based rank-one convexity (Legendre-Hadamard ellipticity) checks
// and the simple-shear construction showing that the additive logarithmic
// composite can lose it.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logstrain/energy.hpp"
#include "logstrain/matrix.hpp"

namespace logstrain {

enum class Verdict { Elliptic, Violated, Inconclusive };

std::string to_string(Verdict v);

struct Witness {
  Vector eta;
  Vector xi;
  Matrix F;
};

struct ScanCell {
  double theta;  // n = 2: angle of eta; n = 3: index of eta on the grid
  double phi;    // n = 2: angle of xi;  n = 3: index of xi on the grid
  Vector eta;
  Vector xi;
  double q;
};

struct ScanOptions {
  int angular_resolution = 128;  // per direction; at least 64
  int threads = 1;               // 0 selects hardware concurrency
  bool refine = true;            // golden-section pass around the minimum
  bool keep_cells = false;       // retain every grid value in the report
};

inline constexpr int kMinAngularResolution = 64;
inline constexpr double kEllipticityRelTol = 1e-6;
inline constexpr double kEllipticityTolFloor = 1e-10;

struct EllipticityReport {
  Verdict verdict = Verdict::Inconclusive;
  double min_q = 0.0;       // smallest directional second derivative found
  double max_abs_q = 0.0;   // curvature scale of the probed grid
  double tol_ell = 0.0;     // max(kEllipticityRelTol * max_abs_q, floor)
  Witness argmin;           // direction pair attaining min_q
  std::optional<Witness> witness;  // present iff verdict == Violated
  std::size_t samples = 0;  // number of (eta, xi) evaluations
  // Richardson estimate at the minimum and its finite-difference error,
  // computed when min_q falls in the boundary band.
  std::optional<double> refined_q;
  std::optional<double> fd_error;
  std::vector<ScanCell> cells;
};

// Default second-difference step: eps^{1/4} * max(1, |F|).
double second_difference_step(const Matrix& f);

// Central second difference of t -> W(F + t eta (x) xi) at t = 0. Returns
// -infinity if a probe has infinite energy. eta and xi must be unit vectors
// (within 1e-12). For SmallStrainQuadratic the three-point stencil is
// evaluated in closed form, which is exact for a quadratic energy and does
// not depend on the plastic strain.
double directional_second_derivative(const EnergyModel& model, const Matrix& f,
                                     const Vector& eta, const Vector& xi);
double directional_second_derivative(const EnergyModel& model, const Matrix& f,
                                     const Vector& eta, const Vector& xi, double step);

// n = 2: eta(theta_i), xi(phi_j) with theta, phi uniform on [0, pi).
// n = 3: Fibonacci points on the upper hemisphere for both directions.
EllipticityReport rank_one_scan(const EnergyModel& model, const Matrix& f,
                                const ScanOptions& options = {});

// Unit vectors used by the scanner, exposed for tests and CSV output.
std::vector<Vector> hemisphere_directions(int n, int resolution);

struct LineConvexity {
  bool convex = true;
  std::optional<std::array<std::size_t, 3>> witness;  // first violating triple
  double min_second_difference = 0.0;
  double tol_line = 0.0;  // 1e-9 * max|h|
};

// Non-uniform three-point second differences, scaled to equal
// h[i-1] - 2 h[i] + h[i+1] on a uniform grid.
LineConvexity line_convexity_check(std::span<const double> t, std::span<const double> h);

struct ShearKinematics {
  SymMatrix U;
  Matrix R;
  SymMatrix logU;
  double lambda1;  // (sqrt(t^2+4) + t) / 2, the larger eigenvalue of U when t >= 0
};

// Closed forms for F = [[1, t], [0, 1]].
ShearKinematics simple_shear_kinematics(double t);

// exp(2 log^2 l - 2 log(l)/(t^2+4) (-2 a t + 4 b) + 2 a^2 + 2 b^2) with
// l = (sqrt(t^2+4)+t)/2, transcribed as published.
double h_closed_form_paper(double a, double b, double t);

// e^{||dev_2 log U - dev_2 log U_p||^2} at F = [[1, t], [0, 1]] with
// log U_p = [[a, b], [b, -a]], evaluated through the generic kernels.
double h_direct(double a, double b, double t);

struct CounterexampleCurve {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> t;
  std::vector<double> h_paper;
  std::vector<double> h_direct;
  double evenness_paper = 0.0;   // max |h(t) - h(-t)| / max(1, max|h|)
  double evenness_direct = 0.0;
  double max_discrepancy = 0.0;  // max |h_paper - h_direct| / max(1, max|h_direct|)
  LineConvexity convexity_paper;
  LineConvexity convexity_direct;
};

inline constexpr double kEvennessTol = 1e-10;

// Grid must be strictly increasing and symmetric about 0.
CounterexampleCurve counterexample_curve(double a, double b, std::span<const double> t_grid);

std::vector<double> uniform_grid(double lo, double hi, std::size_t samples);

struct StretchPoint {
  Vector stretches;
  EllipticityReport report;
};

// rank_one_scan of the hyperelastic model at F = diag(stretches).
std::vector<StretchPoint> stretch_domain_scan(const LogStrainKind& kind,
                                              std::span<const Vector> stretch_grid,
                                              const ScanOptions& options = {});

struct EllipticInterval {
  double lower = 0.0;  // boundary estimate below the identity
  double upper = 0.0;  // boundary estimate above the identity
  bool contains_identity = false;
  bool bounded_below = false;
  bool bounded_above = false;
  std::vector<StretchPoint> grid;
};

// Uniaxial line F = diag(s, 1[, 1]) for s in [lo, hi] (lo < 1 < hi): finds
// the elliptic run containing s = 1 and bisects each boundary.
EllipticInterval uniaxial_elliptic_interval(const LogStrainKind& kind, double lo, double hi,
                                            std::size_t samples, int bisection_steps,
                                            const ScanOptions& options = {});

}  // namespace logstrain
