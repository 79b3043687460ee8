#pragma once

// JSON run configurations. Every object is checked strictly: unknown keys,
// wrong types and out-of-range values raise ConfigError.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "logstrain/energy.hpp"
#include "logstrain/plastic_flow.hpp"

namespace logstrain {

using Json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads and parses a JSON file; IoError if unreadable, ConfigError if malformed.
Json load_json_file(const std::string& path);

enum class PlasticVariant { None, AdditiveLog, Multiplicative, GreenNaghdi, SmallStrain };

enum class ModelFamily { ExponentiatedHencky, QuadraticHencky, SaintVenantKirchhoff, SmallStrain };

struct ModelConfig {
  ModelFamily family = ModelFamily::ExponentiatedHencky;
  int n = 2;
  Moduli moduli;
  PlasticVariant plastic = PlasticVariant::None;
  std::vector<double> plastic_matrix;  // row-major n*n, empty for None

  LogStrainKind kind() const;  // for the two log-strain families
  EnergyModel build() const;
  Json to_json() const;  // echo with defaults filled in
};

ModelConfig parse_model(const Json& j);

Matrix parse_matrix(const Json& j, int n, const std::string& what);

struct EvalConfig {
  ModelConfig model;
  Matrix F;
};
EvalConfig parse_eval(const Json& j);

struct CounterexampleConfig {
  double a = -2.0;
  double b = 0.0;
  double t_min = -2.0;
  double t_max = 2.0;
  std::size_t samples = 401;
  std::string out = "counterexample.csv";

  Json to_json() const;
};
CounterexampleConfig parse_counterexample(const Json& j);

struct ShearSweep {
  double t_min = 0.0;
  double t_max = 1.5;
  std::size_t samples = 31;
};

struct RandomPoints {
  std::size_t count = 50;
  double singular_min = 0.2;
  double singular_max = 5.0;
};

struct ScanConfig {
  ModelConfig model;
  std::vector<Matrix> points;
  std::optional<ShearSweep> shear;
  std::optional<RandomPoints> random;
  int resolution = 128;
  bool refine = true;
  bool cells_csv = false;
  std::string out = "scan_cells.csv";

  // Concrete base points; random ones are drawn from `seed`.
  std::vector<Matrix> base_points(std::uint64_t seed) const;
  Json to_json() const;
};
ScanConfig parse_scan(const Json& j);

// Shear load to t_max and back to 0, F = [[1, s], [0, 1]] (3D: embedded).
struct ShearCycle {
  double t_max = 4.0;
  std::size_t steps_per_leg = 30;
};

struct PathConfig {
  Formulation formulation = Formulation::AdditiveLog;
  ModelConfig kind;  // plastic must be none
  double sigma_y = 1.0;
  std::optional<double> domain_radius_factor;
  SmallStrainMeasure small_strain_measure = SmallStrainMeasure::DisplacementGradient;
  bool probe_ellipticity = true;
  int resolution = 128;
  std::vector<PathSample> steps;
  std::optional<ShearCycle> shear_cycle;
  std::string out = "path.csv";

  std::vector<PathSample> samples() const;
  PathSpec spec_for(Formulation f) const;  // yield defaults per formulation
  Json to_json() const;
};
PathConfig parse_path(const Json& j);

struct CompareConfig {
  PathConfig path;  // formulation field unused
  std::vector<Formulation> formulations;
  std::string out = "compare.csv";

  Json to_json() const;
};
CompareConfig parse_compare(const Json& j);

std::string to_string(ModelFamily f);
std::string to_string(PlasticVariant v);
std::string to_string(SmallStrainMeasure m);

}  // namespace logstrain
