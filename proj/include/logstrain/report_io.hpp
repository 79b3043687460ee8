#pragma once

// CSV and JSON output with a fixed number format (17 significant digits,
// '.' separator, '\n' line endings) so identical runs give identical bytes.

#include <string>
#include <vector>

#include "logstrain/config.hpp"
#include "logstrain/ellipticity.hpp"
#include "logstrain/matrix.hpp"
#include "logstrain/plastic_flow.hpp"

namespace logstrain {

std::string format_number(double x);  // %.17g; "inf", "-inf", "nan" otherwise

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& cells);
  void add_row(const std::vector<double>& values);

  std::size_t rows() const noexcept { return rows_; }
  const std::string& text() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

// Writes bytes verbatim; IoError on failure.
void write_text_file(const std::string& path, const std::string& text);

// Non-finite values become the strings "inf", "-inf", "nan".
Json json_number(double x);
Json json_matrix(const Matrix& m);  // nested rows
Json json_vector(const Vector& v);
Json json_report(const EllipticityReport& r);
Json json_plastic(const PlasticState& s);

// Frobenius norm of eps_p, E_p, or log U_p for F_p = R_p U_p.
double plastic_norm(const PlasticState& s);

// Row-major entries of the plastic variable.
std::vector<double> plastic_entries(const PlasticState& s);

std::string dump_json(const Json& j);  // two-space indent, trailing newline

}  // namespace logstrain
