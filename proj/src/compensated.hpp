#pragma once

// Double-double helpers built on error-free transformations. Used where a
// plain double evaluation would cancel catastrophically: determinants and
// characteristic-polynomial residuals of ill-conditioned SPD matrices.

#include <cmath>

namespace logstrain::detail {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  double value() const noexcept { return hi + lo; }
};

inline DoubleDouble two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline DoubleDouble two_prod(double a, double b) noexcept {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DoubleDouble operator+(DoubleDouble x, DoubleDouble y) noexcept {
  DoubleDouble s = two_sum(x.hi, y.hi);
  s.lo += x.lo + y.lo;
  return two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble x) noexcept { return {-x.hi, -x.lo}; }

inline DoubleDouble operator-(DoubleDouble x, DoubleDouble y) noexcept { return x + (-y); }

inline DoubleDouble operator*(DoubleDouble x, double y) noexcept {
  DoubleDouble p = two_prod(x.hi, y);
  p.lo += x.lo * y;
  return two_sum(p.hi, p.lo);
}

// a*d - b*c with a single final rounding (up to a few ulps).
inline DoubleDouble minor2(double a, double b, double c, double d) noexcept {
  return two_prod(a, d) - two_prod(b, c);
}

}  // namespace logstrain::detail
