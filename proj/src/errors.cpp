#include "logstrain/errors.hpp"

#include <cstdio>

namespace logstrain {

namespace {
std::string format_value(const char* prefix, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s%.17g", prefix, v);
  return buf;
}
}  // namespace

OrientationError::OrientationError(double det)
    : std::domain_error(format_value(
          "orientation constraint det F > 0 violated: det F = ", det)),
      det_(det) {}

NotPositiveDefinite::NotPositiveDefinite(double eigenvalue)
    : std::domain_error(
          format_value("matrix is not positive definite: eigenvalue ", eigenvalue)),
      eigenvalue_(eigenvalue) {}

NonConvergence::NonConvergence(const std::string& what, double residual)
    : std::runtime_error(what + format_value(" (residual ", residual) + ")"),
      residual_(residual) {}

}  // namespace logstrain
