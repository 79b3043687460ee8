#include "logstrain/commands.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "logstrain/ellipticity.hpp"
#include "logstrain/errors.hpp"
#include "logstrain/plastic_flow.hpp"
#include "logstrain/report_io.hpp"

namespace logstrain {

namespace {

std::string resolve_output(const CommandOptions& opt, const std::string& name) {
  const std::filesystem::path p(name);
  if (p.is_absolute()) return p.string();
  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + opt.out_dir + "'");
  return (std::filesystem::path(opt.out_dir) / p).string();
}

bool is_small_strain(const EnergyModel& model) {
  return std::holds_alternative<EnergyModel::SmallStrainQuadratic>(model.variant());
}

void require_orientation(const EnergyModel& model, const Matrix& f) {
  if (!is_small_strain(model) && !(f.determinant() > 0.0)) throw OrientationError(f.determinant());
}

Json line_json(const LineConvexity& c, const std::vector<double>& t) {
  Json j;
  j["verdict"] = c.convex ? "convex" : "nonconvex";
  j["min_second_difference"] = json_number(c.min_second_difference);
  j["tol_line"] = json_number(c.tol_line);
  if (c.witness) {
    const auto& w = *c.witness;
    j["witness_t"] = {t[w[0]], t[w[1]], t[w[2]]};
  } else {
    j["witness_t"] = nullptr;
  }
  return j;
}

std::vector<std::string> matrix_headers(const std::string& prefix, int n) {
  std::vector<std::string> h;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h.push_back(prefix + std::to_string(i) + std::to_string(j));
  return h;
}

void append_matrix(std::vector<std::string>& row, const Matrix& m) {
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) row.push_back(format_number(m(i, j)));
}

std::string verdict_cell(const StepResult& r) {
  return r.ellipticity ? to_string(r.ellipticity->verdict) : "skipped";
}

ScanOptions scan_options(int resolution, bool refine, const CommandOptions& opt) {
  ScanOptions s;
  s.angular_resolution = resolution;
  s.refine = refine;
  s.threads = opt.threads;
  return s;
}

struct PathRun {
  PathSpec spec;
  std::vector<StepResult> steps;
};

PathRun run_path(const PathConfig& cfg, Formulation f, const CommandOptions& opt) {
  PathRun run{cfg.spec_for(f), {}};
  DriveOptions d;
  d.probe_ellipticity = cfg.probe_ellipticity;
  d.scan = scan_options(cfg.resolution, true, opt);
  try {
    run.spec.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("path: ") + e.what());
  }
  run.steps = drive_path(run.spec, d);
  return run;
}

Json path_summary(const PathRun& run) {
  Json j;
  const double tol = kkt_tolerance(run.spec.yield);
  double max_yield = -std::numeric_limits<double>::infinity();
  double max_comp = 0.0;
  std::size_t plastic_steps = 0;
  bool kkt_pass = true;
  Json first = nullptr;
  Json counts = {{"elliptic", 0}, {"violated", 0}, {"inconclusive", 0}};
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    const StepResult& r = run.steps[i];
    max_yield = std::max(max_yield, r.kkt.yield_residual);
    max_comp = std::max(max_comp, r.kkt.complementarity_residual);
    plastic_steps += r.plastic_step ? 1 : 0;
    kkt_pass = kkt_pass && kkt_check(r, tol).pass;
    if (r.ellipticity) {
      const std::string v = to_string(r.ellipticity->verdict);
      counts[v] = counts[v].get<int>() + 1;
      if (r.ellipticity->verdict == Verdict::Violated && first.is_null()) {
        first = {{"index", i}, {"t", r.t}, {"report", json_report(*r.ellipticity)}};
      }
    }
  }
  j["formulation"] = to_string(run.spec.formulation);
  j["steps"] = run.steps.size();
  j["plastic_steps"] = plastic_steps;
  j["radius"] = run.spec.yield.radius();
  j["kkt_tolerance"] = tol;
  j["max_yield_residual"] = json_number(max_yield);
  j["max_complementarity_residual"] = json_number(max_comp);
  j["kkt_pass"] = kkt_pass;
  j["first_violating_step"] = first;
  if (!run.steps.empty() && run.steps.front().ellipticity) j["verdict_counts"] = counts;
  j["final_plastic_state"] = json_plastic(run.steps.back().plastic);
  return j;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) {
    return kExitConfig;
  }
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const NonConvergence*>(&e)) return kExitNonConvergence;
  if (dynamic_cast<const std::domain_error*>(&e)) return kExitDomain;
  return kExitInternal;
}

Json cmd_eval(const Json& config, const CommandOptions&) {
  const EvalConfig cfg = parse_eval(config);
  const EnergyModel model = cfg.model.build();
  require_orientation(model, cfg.F);

  Json j;
  j["command"] = "eval";
  j["model"] = cfg.model.to_json();
  j["model_name"] = model.name();
  j["F"] = json_matrix(cfg.F);
  j["energy"] = json_number(energy_eval(model, cfg.F));
  j["piola_stress"] = json_matrix(piola_stress_fd(model, cfg.F));
  if (cfg.F.determinant() > 0.0) {
    const CauchyStress c = cauchy_stress(model, cfg.F);
    j["cauchy_stress"] = json_matrix(c.sigma);
    j["cauchy_relative_asymmetry"] = json_number(c.relative_asymmetry);
  } else {
    j["cauchy_stress"] = nullptr;
  }
  if (const auto d = driving_stress(model, cfg.F)) {
    j["driving_stress"] = json_matrix(*d);
  } else {
    j["driving_stress"] = nullptr;
  }
  Json warnings = Json::array();
  if (cfg.model.family == ModelFamily::ExponentiatedHencky) {
    for (const std::string& w : cfg.model.kind().warnings()) warnings.push_back(w);
  }
  j["warnings"] = warnings;
  return j;
}

Json cmd_counterexample(const Json& config, const CommandOptions& opt) {
  const CounterexampleConfig cfg = parse_counterexample(config);
  const std::vector<double> grid = uniform_grid(cfg.t_min, cfg.t_max, cfg.samples);
  const CounterexampleCurve c = counterexample_curve(cfg.a, cfg.b, grid);

  CsvTable csv({"t", "h_paper", "h_direct"});
  for (std::size_t i = 0; i < grid.size(); ++i) csv.add_row({c.t[i], c.h_paper[i], c.h_direct[i]});
  const std::string path = resolve_output(opt, cfg.out);
  write_text_file(path, csv.text());

  Json j;
  j["command"] = "counterexample";
  j["parameters"] = cfg.to_json();
  j["csv"] = path;
  j["h_paper"] = line_json(c.convexity_paper, c.t);
  j["h_direct"] = line_json(c.convexity_direct, c.t);
  j["evenness_residual"] = {{"h_paper", c.evenness_paper}, {"h_direct", c.evenness_direct}};
  j["evenness_tol"] = kEvennessTol;
  j["even"] = c.evenness_paper <= kEvennessTol && c.evenness_direct <= kEvennessTol;
  const double p0 = h_closed_form_paper(cfg.a, cfg.b, 0.0), p1 = h_closed_form_paper(cfg.a, cfg.b, 1.0);
  const double d0 = h_direct(cfg.a, cfg.b, 0.0), d1 = h_direct(cfg.a, cfg.b, 1.0);
  j["values"] = {{"h_paper_at_0", p0}, {"h_paper_at_1", p1}, {"h_direct_at_0", d0}, {"h_direct_at_1", d1}};
  j["decreases_from_0_to_1"] = {{"h_paper", p1 < p0}, {"h_direct", d1 < d0}};
  j["discrepancy"] = {{"at_1", p1 - d1}, {"max_relative", c.max_discrepancy}};
  return j;
}

Json cmd_scan(const Json& config, const CommandOptions& opt) {
  const ScanConfig cfg = parse_scan(config);
  const EnergyModel model = cfg.model.build();
  const std::vector<Matrix> points = cfg.base_points(opt.seed);
  ScanOptions so = scan_options(cfg.resolution, cfg.refine, opt);
  so.keep_cells = cfg.cells_csv;

  const int n = cfg.model.n;
  std::vector<std::string> header{"point"};
  if (n == 2) {
    header.insert(header.end(), {"theta", "phi", "q"});
  } else {
    header.insert(header.end(), {"eta_x", "eta_y", "eta_z", "xi_x", "xi_y", "xi_z", "q"});
  }
  CsvTable cells(header);

  Json reports = Json::array();
  std::size_t violated = 0, inconclusive = 0;
  Json first = nullptr;
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_orientation(model, points[i]);
    const EllipticityReport r = rank_one_scan(model, points[i], so);
    Json pj = {{"index", i}, {"F", json_matrix(points[i])}, {"report", json_report(r)}};
    reports.push_back(pj);
    if (r.verdict == Verdict::Violated) {
      ++violated;
      if (first.is_null()) first = {{"index", i}, {"F", json_matrix(points[i])}};
    }
    if (r.verdict == Verdict::Inconclusive) ++inconclusive;
    for (const ScanCell& c : r.cells) {
      std::vector<double> row{static_cast<double>(i)};
      if (n == 2) {
        row.insert(row.end(), {c.theta, c.phi, c.q});
      } else {
        row.insert(row.end(), {c.eta[0], c.eta[1], c.eta[2], c.xi[0], c.xi[1], c.xi[2], c.q});
      }
      cells.add_row(row);
    }
  }

  Json j;
  j["command"] = "scan";
  j["parameters"] = cfg.to_json();
  j["seed"] = opt.seed;
  j["model_name"] = model.name();
  j["points"] = points.size();
  j["aggregate_verdict"] = violated ? "violated" : inconclusive ? "inconclusive" : "elliptic";
  j["violated_points"] = violated;
  j["inconclusive_points"] = inconclusive;
  j["first_violating_point"] = first;
  j["reports"] = reports;
  if (cfg.cells_csv) {
    const std::string path = resolve_output(opt, cfg.out);
    write_text_file(path, cells.text());
    j["csv"] = path;
  }
  return j;
}

Json cmd_path(const Json& config, const CommandOptions& opt) {
  const PathConfig cfg = parse_path(config);
  const PathRun run = run_path(cfg, cfg.formulation, opt);
  const int n = cfg.kind.n;

  std::vector<std::string> header{"t"};
  for (auto& h : matrix_headers("stress_", n)) header.push_back(h);
  for (auto& h : matrix_headers("plastic_", n)) header.push_back(h);
  header.insert(header.end(), {"lambda_plus", "delta_gamma", "yield_residual",
                               "complementarity_residual", "energy", "verdict", "min_q"});
  CsvTable csv(header);
  for (const StepResult& r : run.steps) {
    std::vector<std::string> row{format_number(r.t)};
    append_matrix(row, r.stress);
    for (double v : plastic_entries(r.plastic)) row.push_back(format_number(v));
    for (double v : {r.lambda_plus, r.delta_gamma, r.kkt.yield_residual,
                     r.kkt.complementarity_residual, r.energy}) {
      row.push_back(format_number(v));
    }
    row.push_back(verdict_cell(r));
    row.push_back(r.ellipticity ? format_number(r.ellipticity->min_q) : "");
    csv.add_row(row);
  }
  const std::string path = resolve_output(opt, cfg.out);
  write_text_file(path, csv.text());

  Json j = path_summary(run);
  j = Json{{"command", "path"}, {"parameters", cfg.to_json()}, {"csv", path}, {"summary", j}};
  return j;
}

Json cmd_compare(const Json& config, const CommandOptions& opt) {
  const CompareConfig cfg = parse_compare(config);
  std::vector<PathRun> runs;
  for (Formulation f : cfg.formulations) runs.push_back(run_path(cfg.path, f, opt));
  const int n = cfg.path.kind.n;

  std::vector<std::string> header{"t"};
  for (Formulation f : cfg.formulations) {
    const std::string p = to_string(f) + "_";
    for (auto& h : matrix_headers(p + "stress_", n)) header.push_back(h);
    header.insert(header.end(), {p + "plastic_norm", p + "energy", p + "verdict"});
  }
  CsvTable csv(header);
  const std::size_t steps = runs.front().steps.size();
  for (std::size_t i = 0; i < steps; ++i) {
    std::vector<std::string> row{format_number(runs.front().steps[i].t)};
    for (const PathRun& run : runs) {
      const StepResult& r = run.steps[i];
      append_matrix(row, r.stress);
      row.push_back(format_number(plastic_norm(r.plastic)));
      row.push_back(format_number(r.energy));
      row.push_back(verdict_cell(r));
    }
    csv.add_row(row);
  }
  const std::string path = resolve_output(opt, cfg.out);
  write_text_file(path, csv.text());

  Json per = Json::object();
  for (const PathRun& run : runs) per[to_string(run.spec.formulation)] = path_summary(run);
  Json diffs = Json::array();
  for (std::size_t a = 0; a < runs.size(); ++a) {
    for (std::size_t b = a + 1; b < runs.size(); ++b) {
      double ds = 0.0, de = 0.0;
      std::size_t verdicts_differ = 0;
      for (std::size_t i = 0; i < steps; ++i) {
        const StepResult& ra = runs[a].steps[i];
        const StepResult& rb = runs[b].steps[i];
        ds = std::max(ds, max_abs_diff(ra.stress, rb.stress));
        de = std::max(de, std::abs(ra.energy - rb.energy) / std::max(1.0, std::abs(rb.energy)));
        verdicts_differ += verdict_cell(ra) != verdict_cell(rb) ? 1 : 0;
      }
      diffs.push_back({{"first", to_string(runs[a].spec.formulation)},
                       {"second", to_string(runs[b].spec.formulation)},
                       {"max_abs_stress_difference", ds},
                       {"max_relative_energy_difference", de},
                       {"steps_with_different_verdict", verdicts_differ}});
    }
  }
  return {{"command", "compare"}, {"parameters", cfg.to_json()}, {"csv", path},
          {"formulations", per}, {"differences", diffs}};
}

}  // namespace logstrain
