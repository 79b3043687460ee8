#include "logstrain/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "logstrain/errors.hpp"
#include "logstrain/tensor_kernels.hpp"

namespace logstrain {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
  add_row(header);
  rows_ = 0;
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw InvalidArgument("CSV row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
  ++rows_;
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(cells);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

Json json_matrix(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(json_number(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json json_vector(const Vector& v) {
  Json a = Json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(json_number(v[i]));
  return a;
}

Json json_report(const EllipticityReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["min_q"] = json_number(r.min_q);
  j["max_abs_q"] = json_number(r.max_abs_q);
  j["tol_ell"] = json_number(r.tol_ell);
  j["samples"] = r.samples;
  j["argmin"] = {{"eta", json_vector(r.argmin.eta)}, {"xi", json_vector(r.argmin.xi)}};
  if (r.witness) {
    j["witness"] = {{"eta", json_vector(r.witness->eta)},
                    {"xi", json_vector(r.witness->xi)},
                    {"F", json_matrix(r.witness->F)}};
  } else {
    j["witness"] = nullptr;
  }
  if (r.refined_q) j["refined_q"] = json_number(*r.refined_q);
  if (r.fd_error) j["fd_error"] = json_number(*r.fd_error);
  return j;
}

Json json_plastic(const PlasticState& s) {
  if (const auto* p = std::get_if<SmallStrainPlastic>(&s)) {
    return {{"variant", "small_strain"}, {"eps_p", json_matrix(p->eps_p)}};
  }
  if (const auto* p = std::get_if<AdditiveLogPlastic>(&s)) {
    return {{"variant", "additive_log"}, {"ep_log", json_matrix(p->ep_log)}};
  }
  const auto& p = std::get<MultiplicativePlastic>(s);
  return {{"variant", "multiplicative"},
          {"fp", json_matrix(p.fp)},
          {"det_fp", json_number(p.fp.determinant())}};
}

double plastic_norm(const PlasticState& s) {
  if (const auto* p = std::get_if<SmallStrainPlastic>(&s)) return p->eps_p.norm();
  if (const auto* p = std::get_if<AdditiveLogPlastic>(&s)) return p->ep_log.norm();
  return log_stretch(std::get<MultiplicativePlastic>(s).fp).norm();
}

std::vector<double> plastic_entries(const PlasticState& s) {
  const Matrix& m = std::visit(
      [](const auto& p) -> const Matrix& {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SmallStrainPlastic>) return p.eps_p.full();
        else if constexpr (std::is_same_v<T, AdditiveLogPlastic>) return p.ep_log.full();
        else return p.fp;
      },
      s);
  std::vector<double> out;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out.push_back(m(i, j));
  return out;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace logstrain
