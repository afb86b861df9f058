#pragma once

#include <span>

namespace snc {

/// A finite, strictly positive real. Construction throws DomainError otherwise.
class PositiveReal {
 public:
  explicit PositiveReal(double value);
  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

/// ln Gamma(x) for x > 0; relative error below 1e-13 on [1e-3, 1e6].
/// Throws DomainError for non-finite or non-positive x.
double log_gamma(double x);

/// Sum of ln Gamma over `num` minus the sum over `den`.
double log_gamma_ratio(std::span<const double> num, std::span<const double> den);

struct GurlandRatio {
  double value;
  // Monotonicity of F is only claimed on (0, 1]; values above 1 are still
  // computed but carry this flag.
  bool beyond_unit_interval;
};

/// F(x) = Gamma(5x) Gamma(x) / Gamma(3x)^2.
GurlandRatio gurland_F(double x);

/// ln F(x), without the final exponentiation.
double log_gurland_F(double x);

/// F(x) - 3 evaluated as 3 * expm1(ln F - ln 3), accurate near x = 1/2.
double gurland_F_minus_3(double x);

}  // namespace snc
