#pragma once

#include <stdexcept>
#include <string>

namespace logstrain {

// Bad input shape or value: non-finite entries, wrong dimension, non-unit
// probe directions, too few samples.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An operation that requires det F > 0 received an orientation-reversing or
// singular matrix.
class OrientationError : public std::domain_error {
 public:
  explicit OrientationError(double det);
  double determinant() const noexcept { return det_; }

 private:
  double det_;
};

class NotPositiveDefinite : public std::domain_error {
 public:
  explicit NotPositiveDefinite(double eigenvalue);
  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

// Generic out-of-domain argument (e.g. t <= 0 for a 1D energy).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A finite-difference stencil touched the det F <= 0 region.
class BoundaryProximityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual);
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace logstrain
