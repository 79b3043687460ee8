#include "logstrain/ellipticity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "logstrain/errors.hpp"
#include "logstrain/tensor_kernels.hpp"

namespace logstrain {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_unit(const Vector& v, const char* what) {
  if (!v.all_finite() || std::abs(v.norm() - 1.0) > kUnitTol) {
    throw InvalidArgument(std::string(what) + " must be a unit vector");
  }
}

double quadratic_stencil(const EnergyModel::SmallStrainQuadratic& m, const Matrix& d) {
  // [W(e + h S) - 2 W(e) + W(e - h S)] / h^2 for W(e) = mu |e|^2 + lambda/2 tr(e)^2.
  const SymMatrix s = SymMatrix::symmetric_part(d);
  const double tr = s.trace();
  return 2.0 * m.mu * inner(s, s) + m.lambda * tr * tr;
}

// Second difference with a precomputed centre value.
double second_difference(const EnergyModel& model, const Matrix& f, double w0, const Vector& eta,
                         const Vector& xi, double step) {
  const Matrix d = outer(eta, xi);
  if (const auto* ss = std::get_if<EnergyModel::SmallStrainQuadratic>(&model.variant())) {
    return quadratic_stencil(*ss, d);
  }
  const double wp = energy_eval(model, f + step * d);
  const double wm = energy_eval(model, f - step * d);
  if (!std::isfinite(wp) || !std::isfinite(wm) || !std::isfinite(w0)) return kNegInf;
  return (wp - 2.0 * w0 + wm) / (step * step);
}

Vector unit_2d(double angle) { return Vector{std::cos(angle), std::sin(angle)}; }

Vector unit_3d(double polar, double azimuth) {
  return Vector{std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
                std::cos(polar)};
}

// Minimizes fn on [lo, hi] by golden-section search; returns (x, fn(x)).
std::pair<double, double> golden_section(const std::function<double(double)>& fn, double lo,
                                         double hi, int iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int k = 0; k < iterations; ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

int resolve_threads(int requested, int work_items) {
  int t = requested;
  if (t <= 0) t = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::clamp(t, 1, std::max(1, work_items));
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Elliptic:
      return "elliptic";
    case Verdict::Violated:
      return "violated";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

double second_difference_step(const Matrix& f) {
  return std::pow(std::numeric_limits<double>::epsilon(), 0.25) * std::max(1.0, f.norm());
}

double directional_second_derivative(const EnergyModel& model, const Matrix& f,
                                     const Vector& eta, const Vector& xi, double step) {
  if (model.dim() != f.dim() || eta.dim() != f.dim() || xi.dim() != f.dim()) {
    throw InvalidArgument("directional_second_derivative: dimension mismatch");
  }
  require_unit(eta, "eta");
  require_unit(xi, "xi");
  if (!(step > 0.0)) throw InvalidArgument("step must be > 0");
  return second_difference(model, f, energy_eval(model, f), eta, xi, step);
}

double directional_second_derivative(const EnergyModel& model, const Matrix& f,
                                     const Vector& eta, const Vector& xi) {
  return directional_second_derivative(model, f, eta, xi, second_difference_step(f));
}

std::vector<Vector> hemisphere_directions(int n, int resolution) {
  std::vector<Vector> dirs;
  dirs.reserve(resolution);
  if (n == 2) {
    for (int i = 0; i < resolution; ++i) dirs.push_back(unit_2d(std::numbers::pi * i / resolution));
    return dirs;
  }
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < resolution; ++i) {
    const double z = (i + 0.5) / resolution;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double az = golden_angle * i;
    dirs.push_back(Vector{r * std::cos(az), r * std::sin(az), z});
  }
  return dirs;
}

EllipticityReport rank_one_scan(const EnergyModel& model, const Matrix& f,
                                const ScanOptions& options) {
  const int n = f.dim();
  if (model.dim() != n) throw InvalidArgument("rank_one_scan: dimension mismatch");
  const int res = options.angular_resolution;
  if (res < kMinAngularResolution) {
    throw InvalidArgument("angular resolution must be >= " +
                          std::to_string(kMinAngularResolution));
  }
  const double w0 = energy_eval(model, f);
  if (!std::isfinite(w0)) throw OrientationError(f.determinant());
  const double step = second_difference_step(f);

  const std::vector<Vector> dirs = hemisphere_directions(n, res);
  const std::size_t cells = static_cast<std::size_t>(res) * res;
  std::vector<double> q(cells);

  const int nthreads = resolve_threads(options.threads, res);
  auto work = [&](int first_row, int last_row) {
    for (int i = first_row; i < last_row; ++i)
      for (int j = 0; j < res; ++j)
        q[static_cast<std::size_t>(i) * res + j] =
            second_difference(model, f, w0, dirs[i], dirs[j], step);
  };
  if (nthreads == 1) {
    work(0, res);
  } else {
    std::vector<std::jthread> pool;
    const int chunk = (res + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
      const int lo = t * chunk, hi = std::min(res, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
  }

  // Reduction in fixed index order so the result does not depend on threads.
  EllipticityReport report;
  report.samples = cells;
  std::size_t best = 0;
  double max_abs = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    if (q[c] < q[best]) best = c;
    if (std::isfinite(q[c])) max_abs = std::max(max_abs, std::abs(q[c]));
  }
  double min_q = q[best];
  Vector best_eta = dirs[best / res];
  Vector best_xi = dirs[best % res];

  if (options.refine && std::isfinite(min_q)) {
    auto eval = [&](const Vector& eta, const Vector& xi) {
      ++report.samples;
      return second_difference(model, f, w0, eta, xi, step);
    };
    constexpr int kGoldenIterations = 30;
    if (n == 2) {
      double theta = std::atan2(best_eta[1], best_eta[0]);
      double phi = std::atan2(best_xi[1], best_xi[0]);
      const double width = std::numbers::pi / res;
      auto [t_opt, t_val] = golden_section(
          [&](double x) { return eval(unit_2d(x), unit_2d(phi)); }, theta - width, theta + width,
          kGoldenIterations);
      if (t_val < min_q) {
        min_q = t_val;
        theta = t_opt;
      }
      auto [p_opt, p_val] = golden_section(
          [&](double x) { return eval(unit_2d(theta), unit_2d(x)); }, phi - width, phi + width,
          kGoldenIterations);
      if (p_val < min_q) {
        min_q = p_val;
        phi = p_opt;
      }
      best_eta = unit_2d(theta);
      best_xi = unit_2d(phi);
    } else {
      // Spherical angles (polar, azimuth) of eta then xi.
      std::array<double, 4> ang{std::acos(std::clamp(best_eta[2], -1.0, 1.0)),
                                std::atan2(best_eta[1], best_eta[0]),
                                std::acos(std::clamp(best_xi[2], -1.0, 1.0)),
                                std::atan2(best_xi[1], best_xi[0])};
      const double width = std::sqrt(2.0 * std::numbers::pi / res);
      for (int k = 0; k < 4; ++k) {
        double w = width;
        if (k % 2 == 1) w = std::min(std::numbers::pi, width / std::max(std::sin(ang[k - 1]), 1e-3));
        auto fn = [&](double x) {
          std::array<double, 4> trial = ang;
          trial[k] = x;
          return eval(unit_3d(trial[0], trial[1]), unit_3d(trial[2], trial[3]));
        };
        auto [x_opt, x_val] = golden_section(fn, ang[k] - w, ang[k] + w, kGoldenIterations);
        if (x_val < min_q) {
          min_q = x_val;
          ang[k] = x_opt;
        }
      }
      best_eta = unit_3d(ang[0], ang[1]);
      best_xi = unit_3d(ang[2], ang[3]);
    }
  }

  report.min_q = min_q;
  report.max_abs_q = max_abs;
  report.tol_ell = std::max(kEllipticityRelTol * max_abs, kEllipticityTolFloor);
  report.argmin = Witness{best_eta, best_xi, f};

  if (min_q < -report.tol_ell) {
    report.verdict = Verdict::Violated;
  } else if (min_q > 10.0 * report.tol_ell) {
    report.verdict = Verdict::Elliptic;
  } else {
    // Boundary band: Richardson-extrapolate the minimum and keep the verdict
    // only if the estimate is separated from zero by its own error.
    const double q1 = second_difference(model, f, w0, best_eta, best_xi, step);
    const double q2 = second_difference(model, f, w0, best_eta, best_xi, 0.5 * step);
    report.samples += 2;
    const double refined = (4.0 * q2 - q1) / 3.0;
    const double err = std::abs(q2 - q1);
    report.refined_q = refined;
    report.fd_error = err;
    if (refined < -report.tol_ell) {
      report.min_q = refined;
      report.verdict = Verdict::Violated;
    } else if (refined > err) {
      report.verdict = Verdict::Elliptic;
    } else {
      report.verdict = Verdict::Inconclusive;
    }
  }
  if (report.verdict == Verdict::Violated) report.witness = report.argmin;

  if (options.keep_cells) {
    report.cells.reserve(cells);
    for (int i = 0; i < res; ++i) {
      for (int j = 0; j < res; ++j) {
        const double theta = n == 2 ? std::numbers::pi * i / res : static_cast<double>(i);
        const double phi = n == 2 ? std::numbers::pi * j / res : static_cast<double>(j);
        report.cells.push_back({theta, phi, dirs[i], dirs[j], q[static_cast<std::size_t>(i) * res + j]});
      }
    }
  }
  return report;
}

LineConvexity line_convexity_check(std::span<const double> t, std::span<const double> h) {
  if (t.size() != h.size()) throw InvalidArgument("t and h must have equal length");
  if (t.size() < 3) throw InvalidArgument("line convexity check needs at least 3 samples");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw InvalidArgument("t must be strictly increasing");
  }
  LineConvexity out;
  double hmax = 0.0;
  for (double v : h) hmax = std::max(hmax, std::abs(v));
  out.tol_line = 1e-9 * hmax;
  out.min_second_difference = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    const double left = (h[i] - h[i - 1]) / (t[i] - t[i - 1]);
    const double right = (h[i + 1] - h[i]) / (t[i + 1] - t[i]);
    const double d2 = (right - left) * 0.5 * (t[i + 1] - t[i - 1]);
    out.min_second_difference = std::min(out.min_second_difference, d2);
    if (!(d2 >= -out.tol_line) && out.convex) {
      out.convex = false;
      out.witness = std::array<std::size_t, 3>{i - 1, i, i + 1};
    }
  }
  return out;
}

ShearKinematics simple_shear_kinematics(double t) {
  const double s = std::sqrt(t * t + 4.0);
  const double lambda1 = 0.5 * (s + t);
  const double l = std::log(lambda1);
  ShearKinematics k{SymMatrix(2, {2.0 / s, t / s, t / s, (t * t + 2.0) / s}),
                    Matrix(2, {2.0 / s, t / s, -t / s, 2.0 / s}),
                    SymMatrix(2, {-t * l / s, 2.0 * l / s, 2.0 * l / s, t * l / s}), lambda1};
  return k;
}

double h_closed_form_paper(double a, double b, double t) {
  const double l = std::log(0.5 * (std::sqrt(t * t + 4.0) + t));
  const double exponent =
      2.0 * l * l - 2.0 * (l / (t * t + 4.0)) * (-2.0 * a * t + 4.0 * b) + 2.0 * a * a + 2.0 * b * b;
  return std::exp(exponent);
}

double h_direct(double a, double b, double t) {
  const EnergyModel model =
      EnergyModel::additive_log(exp_hencky_isochoric(2), SymMatrix(2, {a, b, b, -a}));
  return energy_eval(model, Matrix(2, {1.0, t, 0.0, 1.0}));
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t samples) {
  if (samples < 2) throw InvalidArgument("grid needs at least 2 samples");
  if (!(hi > lo)) throw InvalidArgument("grid needs hi > lo");
  // Written around the midpoint so a grid symmetric about 0 is exactly odd.
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double denom = static_cast<double>(samples - 1);
  std::vector<double> t(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double k = 2.0 * static_cast<double>(i) - denom;
    t[i] = mid + half * (k / denom);
  }
  return t;
}

CounterexampleCurve counterexample_curve(double a, double b, std::span<const double> t_grid) {
  const std::size_t n = t_grid.size();
  if (n < 3) throw InvalidArgument("counterexample grid needs at least 3 samples");
  double tmax = 0.0;
  for (double x : t_grid) tmax = std::max(tmax, std::abs(x));
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(t_grid[i] + t_grid[n - 1 - i]) > 1e-12 * std::max(1.0, tmax)) {
      throw InvalidArgument("counterexample grid must be symmetric about 0");
    }
  }
  CounterexampleCurve c;
  c.a = a;
  c.b = b;
  c.t.assign(t_grid.begin(), t_grid.end());
  c.h_paper.resize(n);
  c.h_direct.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.h_paper[i] = h_closed_form_paper(a, b, t_grid[i]);
    c.h_direct[i] = h_direct(a, b, t_grid[i]);
  }
  auto evenness = [n](const std::vector<double>& h) {
    double hmax = 0.0, r = 0.0;
    for (double v : h) hmax = std::max(hmax, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(h[i] - h[n - 1 - i]));
    return r / std::max(1.0, hmax);
  };
  c.evenness_paper = evenness(c.h_paper);
  c.evenness_direct = evenness(c.h_direct);
  double dmax = 0.0, hmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dmax = std::max(dmax, std::abs(c.h_paper[i] - c.h_direct[i]));
    hmax = std::max(hmax, std::abs(c.h_direct[i]));
  }
  c.max_discrepancy = dmax / std::max(1.0, hmax);
  c.convexity_paper = line_convexity_check(c.t, c.h_paper);
  c.convexity_direct = line_convexity_check(c.t, c.h_direct);
  return c;
}

std::vector<StretchPoint> stretch_domain_scan(const LogStrainKind& kind,
                                              std::span<const Vector> stretch_grid,
                                              const ScanOptions& options) {
  const EnergyModel model = EnergyModel::hyperelastic(kind);
  std::vector<StretchPoint> out;
  out.reserve(stretch_grid.size());
  for (const Vector& s : stretch_grid) {
    if (s.dim() != kind.n) throw InvalidArgument("stretch dimension must match the model");
    for (int i = 0; i < s.dim(); ++i) {
      if (!(s[i] > 0.0)) throw InvalidArgument("stretches must be positive");
    }
    out.push_back({s, rank_one_scan(model, Matrix::diagonal(s), options)});
  }
  return out;
}

EllipticInterval uniaxial_elliptic_interval(const LogStrainKind& kind, double lo, double hi,
                                            std::size_t samples, int bisection_steps,
                                            const ScanOptions& options) {
  if (!(lo > 0.0 && lo < 1.0 && hi > 1.0)) throw InvalidArgument("need 0 < lo < 1 < hi");
  const EnergyModel model = EnergyModel::hyperelastic(kind);
  auto stretch_vec = [&](double s) {
    Vector v(kind.n);
    for (int i = 0; i < kind.n; ++i) v[i] = 1.0;
    v[0] = s;
    return v;
  };
  auto elliptic_at = [&](double s) {
    return rank_one_scan(model, Matrix::diagonal(stretch_vec(s)), options).verdict ==
           Verdict::Elliptic;
  };

  std::vector<double> grid = uniform_grid(std::log(lo), std::log(hi), std::max<std::size_t>(samples, 3));
  for (double& g : grid) g = std::exp(g);
  grid.push_back(1.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  EllipticInterval out;
  std::vector<Vector> stretches;
  for (double s : grid) stretches.push_back(stretch_vec(s));
  out.grid = stretch_domain_scan(kind, stretches, options);

  const auto one = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), 1.0) - grid.begin());
  auto ok = [&](std::size_t i) { return out.grid[i].report.verdict == Verdict::Elliptic; };
  out.contains_identity = ok(one);
  if (!out.contains_identity) return out;

  std::size_t lo_i = one, hi_i = one;
  while (lo_i > 0 && ok(lo_i - 1)) --lo_i;
  while (hi_i + 1 < grid.size() && ok(hi_i + 1)) ++hi_i;

  out.lower = grid[lo_i];
  out.upper = grid[hi_i];
  if (lo_i > 0) {
    out.bounded_below = true;
    double inside = grid[lo_i], outside = grid[lo_i - 1];
    for (int k = 0; k < bisection_steps; ++k) {
      const double mid = std::sqrt(inside * outside);
      (elliptic_at(mid) ? inside : outside) = mid;
    }
    out.lower = 0.5 * (inside + outside);
  }
  if (hi_i + 1 < grid.size()) {
    out.bounded_above = true;
    double inside = grid[hi_i], outside = grid[hi_i + 1];
    for (int k = 0; k < bisection_steps; ++k) {
      const double mid = std::sqrt(inside * outside);
      (elliptic_at(mid) ? inside : outside) = mid;
    }
    out.upper = 0.5 * (inside + outside);
  }
  return out;
}

}  // namespace logstrain
