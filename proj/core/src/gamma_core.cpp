#include "snc/gamma_core.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "snc/errors.hpp"

namespace snc {
namespace {

void require_positive(double x, const char* what) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw DomainError(std::string(what) + ": argument must be finite and > 0, got " +
                      std::to_string(x));
  }
}

}  // namespace

PositiveReal::PositiveReal(double value) : value_(value) {
  require_positive(value, "PositiveReal");
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  // Boost's lgamma is reentrant (no signgam global) and handles the zeros at
  // x = 1, 2 with rational approximations.
  return boost::math::lgamma(x);
}

double log_gamma_ratio(std::span<const double> num, std::span<const double> den) {
  double acc = 0.0;
  for (double x : num) acc += log_gamma(x);
  for (double x : den) acc -= log_gamma(x);
  return acc;
}

double log_gurland_F(double x) {
  require_positive(x, "gurland_F");
  const double num[] = {5.0 * x, x};
  const double den[] = {3.0 * x, 3.0 * x};
  return log_gamma_ratio(num, den);
}

GurlandRatio gurland_F(double x) {
  return {std::exp(log_gurland_F(x)), x > 1.0};
}

double gurland_F_minus_3(double x) {
  return 3.0 * std::expm1(log_gurland_F(x) - std::log(3.0));
}

}  // namespace snc
