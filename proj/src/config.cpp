#include "logstrain/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "logstrain/errors.hpp"
#include "logstrain/tensor_kernels.hpp"

namespace logstrain {

namespace {

// Strict view over a JSON object: every key must be consumed before finish().
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path(key) + ": must be finite");
    return x;
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError(path(key) + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
  }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + ": expected a boolean");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown field '" + it.key() + "'");
    }
  }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::vector<double> number_list(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) throw ConfigError(where + ": expected an array of numbers");
    out.push_back(x.get<double>());
    if (!std::isfinite(out.back())) throw ConfigError(where + ": entries must be finite");
  }
  return out;
}

ModelFamily parse_family(const std::string& s, const std::string& where) {
  if (s == "exponentiated_hencky") return ModelFamily::ExponentiatedHencky;
  if (s == "quadratic_hencky") return ModelFamily::QuadraticHencky;
  if (s == "saint_venant_kirchhoff") return ModelFamily::SaintVenantKirchhoff;
  if (s == "small_strain") return ModelFamily::SmallStrain;
  throw ConfigError(where + ": unknown family '" + s + "'");
}

PlasticVariant parse_variant(const std::string& s, const std::string& where) {
  if (s == "none") return PlasticVariant::None;
  if (s == "additive_log") return PlasticVariant::AdditiveLog;
  if (s == "multiplicative") return PlasticVariant::Multiplicative;
  if (s == "green_naghdi") return PlasticVariant::GreenNaghdi;
  if (s == "small_strain") return PlasticVariant::SmallStrain;
  throw ConfigError(where + ": unknown plastic variant '" + s + "'");
}

Formulation parse_formulation(const std::string& s, const std::string& where) {
  if (s == "small_strain") return Formulation::SmallStrain;
  if (s == "additive_log") return Formulation::AdditiveLog;
  if (s == "multiplicative") return Formulation::Multiplicative;
  throw ConfigError(where + ": unknown formulation '" + s + "'");
}

SmallStrainMeasure parse_measure(const std::string& s, const std::string& where) {
  if (s == "displacement_gradient") return SmallStrainMeasure::DisplacementGradient;
  if (s == "log_stretch") return SmallStrainMeasure::LogStretch;
  throw ConfigError(where + ": unknown small-strain measure '" + s + "'");
}

SymMatrix symmetric_or_throw(const Matrix& m, const std::string& where) {
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i + 1; j < m.dim(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-14 * std::max(1.0, m.norm())) {
        throw ConfigError(where + ": matrix must be symmetric");
      }
  return SymMatrix::symmetric_part(m);
}

Matrix shear_matrix(int n, double s) {
  Matrix f = Matrix::identity(n);
  f(0, 1) = s;
  return f;
}

std::vector<PathSample> parse_steps(const Json& v, int n, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<PathSample> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    ObjectReader r(v[i], w);
    if (!r.has("t") || !r.has("F")) throw ConfigError(w + ": needs 't' and 'F'");
    const double t = r.number("t", 0.0);
    Matrix f = parse_matrix(r.raw("F"), n, w + ".F");
    r.finish();
    out.push_back({t, f});
  }
  return out;
}

ShearCycle parse_shear_cycle(const Json& v, const std::string& where) {
  ObjectReader r(v, where);
  ShearCycle c;
  c.t_max = r.number("t_max", c.t_max);
  c.steps_per_leg = r.count("steps_per_leg", c.steps_per_leg);
  r.finish();
  if (c.steps_per_leg < 1) throw ConfigError(where + ".steps_per_leg: must be >= 1");
  return c;
}

Json path_json(const PathConfig& p) {
  Json j;
  j["formulation"] = to_string(p.formulation);
  j["kind"] = p.kind.to_json();
  j["sigma_y"] = p.sigma_y;
  j["domain_radius_factor"] =
      p.domain_radius_factor ? Json(*p.domain_radius_factor)
                             : Json(default_yield(p.formulation, p.sigma_y).radius_factor);
  j["small_strain_measure"] = to_string(p.small_strain_measure);
  j["probe_ellipticity"] = p.probe_ellipticity;
  j["resolution"] = p.resolution;
  if (p.shear_cycle) {
    j["shear_cycle"] = {{"t_max", p.shear_cycle->t_max},
                        {"steps_per_leg", p.shear_cycle->steps_per_leg}};
  } else {
    j["steps"] = p.steps.size();
  }
  j["out"] = p.out;
  return j;
}

// Reads every path field except formulation/formulations and out.
void read_path_body(ObjectReader& r, PathConfig& p, const std::string& where) {
  if (!r.has("kind")) throw ConfigError(where + ": missing 'kind'");
  p.kind = parse_model(r.raw("kind"));
  if (p.kind.plastic != PlasticVariant::None) {
    throw ConfigError(where + ".kind: plastic state is set by the path, not the kind");
  }
  p.sigma_y = r.number("sigma_y", p.sigma_y);
  if (!(p.sigma_y > 0.0)) throw ConfigError(where + ".sigma_y: must be > 0");
  if (r.has("domain_radius_factor")) {
    p.domain_radius_factor = r.number("domain_radius_factor", 0.0);
    if (!(*p.domain_radius_factor > 0.0)) {
      throw ConfigError(where + ".domain_radius_factor: must be > 0");
    }
  }
  p.small_strain_measure =
      parse_measure(r.text("small_strain_measure", "displacement_gradient"), where);
  p.probe_ellipticity = r.flag("probe_ellipticity", p.probe_ellipticity);
  p.resolution = static_cast<int>(r.count("resolution", static_cast<std::size_t>(p.resolution)));
  if (p.resolution < kMinAngularResolution) {
    throw ConfigError(where + ".resolution: must be >= " + std::to_string(kMinAngularResolution));
  }
  const bool has_steps = r.has("steps"), has_cycle = r.has("shear_cycle");
  if (has_steps == has_cycle) throw ConfigError(where + ": give exactly one of 'steps' or 'shear_cycle'");
  if (has_steps) {
    p.steps = parse_steps(r.raw("steps"), p.kind.n, where + ".steps");
    if (p.steps.empty()) throw ConfigError(where + ".steps: must not be empty");
    for (std::size_t i = 1; i < p.steps.size(); ++i) {
      if (!(p.steps[i].t > p.steps[i - 1].t)) {
        throw ConfigError(where + ".steps: t must be strictly increasing");
      }
    }
  } else {
    p.shear_cycle = parse_shear_cycle(r.raw("shear_cycle"), where + ".shear_cycle");
  }
}

void require_log_family(const ModelConfig& m, Formulation f, const std::string& where) {
  if (f == Formulation::SmallStrain) return;
  if (m.family != ModelFamily::ExponentiatedHencky && m.family != ModelFamily::QuadraticHencky) {
    throw ConfigError(where + ": formulation " + to_string(f) + " needs a log-strain family");
  }
}

}  // namespace

std::string to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::ExponentiatedHencky:
      return "exponentiated_hencky";
    case ModelFamily::QuadraticHencky:
      return "quadratic_hencky";
    case ModelFamily::SaintVenantKirchhoff:
      return "saint_venant_kirchhoff";
    case ModelFamily::SmallStrain:
      return "small_strain";
  }
  return "unknown";
}

std::string to_string(PlasticVariant v) {
  switch (v) {
    case PlasticVariant::None:
      return "none";
    case PlasticVariant::AdditiveLog:
      return "additive_log";
    case PlasticVariant::Multiplicative:
      return "multiplicative";
    case PlasticVariant::GreenNaghdi:
      return "green_naghdi";
    case PlasticVariant::SmallStrain:
      return "small_strain";
  }
  return "unknown";
}

std::string to_string(SmallStrainMeasure m) {
  return m == SmallStrainMeasure::LogStretch ? "log_stretch" : "displacement_gradient";
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file '" + path + "'");
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

Matrix parse_matrix(const Json& j, int n, const std::string& what) {
  const std::vector<double> v = number_list(j, what);
  if (v.size() != static_cast<std::size_t>(n * n)) {
    throw ConfigError(what + ": expected " + std::to_string(n * n) + " row-major entries");
  }
  return Matrix::from_row_major(n, v.data());
}

LogStrainKind ModelConfig::kind() const {
  if (family != ModelFamily::ExponentiatedHencky && family != ModelFamily::QuadraticHencky) {
    throw ConfigError("model family " + to_string(family) + " is not a log-strain family");
  }
  LogStrainKind k;
  k.family = family == ModelFamily::ExponentiatedHencky ? LogStrainFamily::ExponentiatedHencky
                                                        : LogStrainFamily::QuadraticHencky;
  k.moduli = moduli;
  k.n = n;
  return k;
}

EnergyModel ModelConfig::build() const {
  const Matrix pm = plastic == PlasticVariant::None ? Matrix::identity(n)
                                                    : Matrix::from_row_major(n, plastic_matrix.data());
  try {
    switch (family) {
      case ModelFamily::ExponentiatedHencky:
      case ModelFamily::QuadraticHencky:
        switch (plastic) {
          case PlasticVariant::None:
            return EnergyModel::hyperelastic(kind());
          case PlasticVariant::AdditiveLog:
            return EnergyModel::additive_log(kind(), symmetric_or_throw(pm, "model.plastic.matrix"));
          case PlasticVariant::Multiplicative:
            return EnergyModel::multiplicative(kind(), pm);
          default:
            break;
        }
        break;
      case ModelFamily::SaintVenantKirchhoff:
        if (plastic == PlasticVariant::None || plastic == PlasticVariant::GreenNaghdi) {
          return EnergyModel::saint_venant_kirchhoff(
              moduli.mu, moduli.lambda,
              plastic == PlasticVariant::None ? SymMatrix(n)
                                              : symmetric_or_throw(pm, "model.plastic.matrix"));
        }
        break;
      case ModelFamily::SmallStrain:
        if (plastic == PlasticVariant::None || plastic == PlasticVariant::SmallStrain) {
          return EnergyModel::small_strain(
              moduli.mu, moduli.lambda,
              plastic == PlasticVariant::None ? SymMatrix(n)
                                              : symmetric_or_throw(pm, "model.plastic.matrix"));
        }
        break;
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  throw ConfigError("model: plastic variant " + to_string(plastic) + " does not apply to family " +
                    to_string(family));
}

Json ModelConfig::to_json() const {
  Json j;
  j["family"] = to_string(family);
  j["n"] = n;
  j["mu"] = moduli.mu;
  j["kappa"] = moduli.kappa;
  j["lambda"] = moduli.lambda;
  j["k"] = moduli.k;
  j["khat"] = moduli.khat;
  Json p;
  p["variant"] = to_string(plastic);
  if (plastic != PlasticVariant::None) p["matrix"] = plastic_matrix;
  j["plastic"] = p;
  return j;
}

ModelConfig parse_model(const Json& j) {
  ObjectReader r(j, "model");
  ModelConfig m;
  if (!r.has("family")) throw ConfigError("model: missing 'family'");
  m.family = parse_family(r.text("family", ""), "model.family");
  const std::size_t n = r.count("n", 2);
  if (n != 2 && n != 3) throw ConfigError("model.n: must be 2 or 3");
  m.n = static_cast<int>(n);
  m.moduli.mu = r.number("mu", m.moduli.mu);
  m.moduli.kappa = r.number("kappa", m.moduli.kappa);
  m.moduli.lambda = r.number("lambda", m.moduli.lambda);
  m.moduli.k = r.number("k", m.moduli.k);
  m.moduli.khat = r.number("khat", m.moduli.khat);
  if (r.has("plastic")) {
    ObjectReader p(r.raw("plastic"), "model.plastic");
    m.plastic = parse_variant(p.text("variant", "none"), "model.plastic.variant");
    if (m.plastic != PlasticVariant::None) {
      if (!p.has("matrix")) throw ConfigError("model.plastic: missing 'matrix'");
      const Matrix pm = parse_matrix(p.raw("matrix"), m.n, "model.plastic.matrix");
      for (int a = 0; a < m.n; ++a)
        for (int b = 0; b < m.n; ++b) m.plastic_matrix.push_back(pm(a, b));
    }
    p.finish();
  }
  r.finish();
  m.build();  // validates moduli and the plastic invariant
  return m;
}

EvalConfig parse_eval(const Json& j) {
  ObjectReader r(j, "config");
  if (!r.has("model") || !r.has("F")) throw ConfigError("config: needs 'model' and 'F'");
  EvalConfig c{parse_model(r.raw("model")), Matrix(2)};
  c.F = parse_matrix(r.raw("F"), c.model.n, "config.F");
  r.finish();
  return c;
}

Json CounterexampleConfig::to_json() const {
  return {{"a", a}, {"b", b}, {"t_min", t_min}, {"t_max", t_max}, {"samples", samples}, {"out", out}};
}

CounterexampleConfig parse_counterexample(const Json& j) {
  ObjectReader r(j, "config");
  CounterexampleConfig c;
  c.a = r.number("a", c.a);
  c.b = r.number("b", c.b);
  c.t_min = r.number("t_min", c.t_min);
  c.t_max = r.number("t_max", c.t_max);
  c.samples = r.count("samples", c.samples);
  c.out = r.text("out", c.out);
  r.finish();
  if (c.samples < 3) throw ConfigError("config.samples: must be >= 3");
  if (!(c.t_max > c.t_min)) throw ConfigError("config: t_max must exceed t_min");
  if (c.t_min != -c.t_max) throw ConfigError("config: grid must be symmetric (t_min = -t_max)");
  return c;
}

std::vector<Matrix> ScanConfig::base_points(std::uint64_t seed) const {
  std::vector<Matrix> out = points;
  const int n = model.n;
  if (shear) {
    const std::size_t m = shear->samples;
    for (std::size_t i = 0; i < m; ++i) {
      const double t = m == 1 ? shear->t_min
                              : shear->t_min + (shear->t_max - shear->t_min) * static_cast<double>(i) /
                                                   static_cast<double>(m - 1);
      out.push_back(shear_matrix(n, t));
    }
  }
  if (random) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double lo = std::log(random->singular_min), hi = std::log(random->singular_max);
    auto rotation = [&]() {
      if (n == 2) return rotation_2d(2.0 * std::numbers::pi * unit(rng));
      Vector axis{gauss(rng), gauss(rng), gauss(rng)};
      return rotation_3d(std::numbers::pi * unit(rng) * normalized(axis));
    };
    for (std::size_t i = 0; i < random->count; ++i) {
      Vector s(n);
      for (int k = 0; k < n; ++k) s[k] = std::exp(lo + (hi - lo) * unit(rng));
      const Matrix q1 = rotation();
      const Matrix q2 = rotation();
      out.push_back(q1 * Matrix::diagonal(s) * q2);
    }
  }
  return out;
}

Json ScanConfig::to_json() const {
  Json j;
  j["model"] = model.to_json();
  j["points"] = points.size();
  if (shear) j["shear"] = {{"t_min", shear->t_min}, {"t_max", shear->t_max}, {"samples", shear->samples}};
  if (random) {
    j["random"] = {{"count", random->count},
                   {"singular_min", random->singular_min},
                   {"singular_max", random->singular_max}};
  }
  j["resolution"] = resolution;
  j["refine"] = refine;
  j["cells_csv"] = cells_csv;
  j["out"] = out;
  j["tol_rel"] = kEllipticityRelTol;
  j["tol_floor"] = kEllipticityTolFloor;
  return j;
}

ScanConfig parse_scan(const Json& j) {
  ObjectReader r(j, "config");
  ScanConfig c;
  if (!r.has("model")) throw ConfigError("config: missing 'model'");
  c.model = parse_model(r.raw("model"));
  if (r.has("points")) {
    const Json& pts = r.raw("points");
    if (!pts.is_array()) throw ConfigError("config.points: expected an array of matrices");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      c.points.push_back(parse_matrix(pts[i], c.model.n, "config.points[" + std::to_string(i) + "]"));
    }
  }
  if (r.has("shear")) {
    ObjectReader s(r.raw("shear"), "config.shear");
    ShearSweep sw;
    sw.t_min = s.number("t_min", sw.t_min);
    sw.t_max = s.number("t_max", sw.t_max);
    sw.samples = s.count("samples", sw.samples);
    s.finish();
    if (sw.samples < 1) throw ConfigError("config.shear.samples: must be >= 1");
    c.shear = sw;
  }
  if (r.has("random")) {
    ObjectReader s(r.raw("random"), "config.random");
    RandomPoints rp;
    rp.count = s.count("count", rp.count);
    rp.singular_min = s.number("singular_min", rp.singular_min);
    rp.singular_max = s.number("singular_max", rp.singular_max);
    s.finish();
    if (!(rp.singular_min > 0.0 && rp.singular_max >= rp.singular_min)) {
      throw ConfigError("config.random: need 0 < singular_min <= singular_max");
    }
    c.random = rp;
  }
  c.resolution = static_cast<int>(r.count("resolution", static_cast<std::size_t>(c.resolution)));
  if (c.resolution < kMinAngularResolution) {
    throw ConfigError("config.resolution: must be >= " + std::to_string(kMinAngularResolution));
  }
  c.refine = r.flag("refine", c.refine);
  c.cells_csv = r.flag("cells_csv", c.cells_csv);
  c.out = r.text("out", c.out);
  r.finish();
  if (c.points.empty() && !c.shear && !c.random) {
    throw ConfigError("config: give at least one of 'points', 'shear' or 'random'");
  }
  return c;
}

std::vector<PathSample> PathConfig::samples() const {
  if (!shear_cycle) return steps;
  std::vector<PathSample> out;
  const std::size_t m = shear_cycle->steps_per_leg;
  for (std::size_t i = 0; i <= 2 * m; ++i) {
    const std::size_t k = i <= m ? i : 2 * m - i;
    const double s = shear_cycle->t_max * static_cast<double>(k) / static_cast<double>(m);
    out.push_back({static_cast<double>(i), shear_matrix(kind.n, s)});
  }
  return out;
}

PathSpec PathConfig::spec_for(Formulation f) const {
  PathSpec spec;
  spec.formulation = f;
  if (f == Formulation::SmallStrain) {
    spec.kind.family = LogStrainFamily::QuadraticHencky;
    spec.kind.moduli = kind.moduli;
    spec.kind.n = kind.n;
  } else {
    spec.kind = kind.kind();
  }
  spec.yield = default_yield(f, sigma_y);
  if (domain_radius_factor) spec.yield.radius_factor = *domain_radius_factor;
  spec.samples = samples();
  spec.small_strain_measure = small_strain_measure;
  return spec;
}

Json PathConfig::to_json() const { return path_json(*this); }

PathConfig parse_path(const Json& j) {
  ObjectReader r(j, "config");
  PathConfig p;
  p.formulation = parse_formulation(r.text("formulation", "additive_log"), "config.formulation");
  read_path_body(r, p, "config");
  p.out = r.text("out", p.out);
  r.finish();
  require_log_family(p.kind, p.formulation, "config");
  return p;
}

Json CompareConfig::to_json() const {
  Json j = path.to_json();
  j.erase("formulation");
  j.erase("domain_radius_factor");
  Json fs = Json::array();
  Json factors = Json::object();
  for (Formulation f : formulations) {
    fs.push_back(to_string(f));
    factors[to_string(f)] = path.spec_for(f).yield.radius_factor;
  }
  j["formulations"] = fs;
  j["domain_radius_factor"] = factors;
  j["out"] = out;
  return j;
}

CompareConfig parse_compare(const Json& j) {
  ObjectReader r(j, "config");
  CompareConfig c;
  if (!r.has("formulations")) throw ConfigError("config: missing 'formulations'");
  const Json& fs = r.raw("formulations");
  if (!fs.is_array() || fs.empty()) throw ConfigError("config.formulations: expected a non-empty array");
  for (const Json& f : fs) {
    if (!f.is_string()) throw ConfigError("config.formulations: expected strings");
    const Formulation form = parse_formulation(f.get<std::string>(), "config.formulations");
    for (Formulation prev : c.formulations) {
      if (prev == form) throw ConfigError("config.formulations: duplicate entry");
    }
    c.formulations.push_back(form);
  }
  read_path_body(r, c.path, "config");
  c.out = r.text("out", c.out);
  r.finish();
  for (Formulation f : c.formulations) require_log_family(c.path.kind, f, "config");
  return c;
}

}  // namespace logstrain
