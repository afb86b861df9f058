#include "snc/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "snc/errors.hpp"
#include "snc/gamma_core.hpp"

namespace snc {
namespace {

void require_p(double p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw DomainError("p must be finite and >= 1, got " + std::to_string(p));
  }
}

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw DomainError("alpha must be finite and >= 0, got " + std::to_string(alpha));
  }
}

// ln[ Gamma(1+n/p) Gamma(3/p)^2 / (Gamma(1+(n+4)/p) Gamma(1/p)^2) ], the common
// prefactor of both ball displays.
double log_ball_prefactor(const LpSpace& s) {
  const double p = s.p;
  const double n = s.n;
  return log_gamma(1.0 + n / p) + 2.0 * log_gamma(3.0 / p) - log_gamma(1.0 + (n + 4.0) / p) -
         2.0 * log_gamma(1.0 / p);
}

// ln R with R = Gamma(1+n/p) Gamma(1+(n+4)/p) / Gamma(1+(n+2)/p)^2 > 1.
// R - 1 is O(1/n), so R is formed from two delta ratios rather than from
// lgamma values of size n ln n.
double log_ball_convexity_ratio(const LpSpace& s) {
  const double a = 1.0 + s.n / s.p;
  const double d = 2.0 / s.p;
  return std::log(boost::math::tgamma_delta_ratio(a, d) / boost::math::tgamma_delta_ratio(a + d, d));
}

// F(1/p) - 1 - 2R, rewritten as (F - 3) - 2 (R - 1) so both cancellations are
// done in expm1 form.
double rotated_bracket(const LpSpace& s) {
  return gurland_F_minus_3(1.0 / s.p) - 2.0 * std::expm1(log_ball_convexity_ratio(s));
}

}  // namespace

void LpSpace::validate(int min_n) const {
  require_p(p);
  if (n < min_n) {
    throw DomainError("dimension n must be >= " + std::to_string(min_n) + ", got " +
                      std::to_string(n));
  }
}

double log_moment_abs_g(double p, double alpha) {
  require_p(p);
  require_alpha(alpha);
  return -std::log1p(alpha) + log_gamma(1.0 + (alpha + 1.0) / p) - log_gamma(1.0 + 1.0 / p);
}

double moment_abs_g(double p, double alpha) {
  if (alpha == 0.0) {
    require_p(p);
    return 1.0;
  }
  return std::exp(log_moment_abs_g(p, alpha));
}

double log_moment_S(double p, int m, double alpha) {
  require_p(p);
  require_alpha(alpha);
  if (m < 1) throw DomainError("number of copies m must be >= 1");
  const double md = m;
  return std::log(md / (md + alpha)) + log_gamma(1.0 + (md + alpha) / p) -
         log_gamma(1.0 + md / p);
}

double moment_S(double p, int m, double alpha) {
  if (alpha == 0.0) {
    require_p(p);
    if (m < 1) throw DomainError("number of copies m must be >= 1");
    return 1.0;
  }
  return std::exp(log_moment_S(p, m, alpha));
}

double mean_square_marginal_ball(const LpSpace& space) {
  space.validate();
  const double p = space.p;
  const double n = space.n;
  return std::exp(log_gamma(3.0 / p) - log_gamma(1.0 / p) + log_gamma(1.0 + n / p) -
                  log_gamma(1.0 + (n + 2.0) / p));
}

double f_canonical(const LpSpace& space) {
  space.validate();
  return std::exp(log_ball_prefactor(space)) * -std::expm1(log_ball_convexity_ratio(space));
}

double f_rotated(const LpSpace& space) {
  space.validate();
  return 0.5 * std::exp(log_ball_prefactor(space)) * rotated_bracket(space);
}

double f_canonical_from_moments(const LpSpace& space) {
  space.validate();
  const double p = space.p;
  const int m = space.n + 1;
  const double es_m = moment_S(p, m, p - 1.0);
  const double es_2 = moment_S(p, m, p + 1.0);
  const double es_4 = moment_S(p, m, p + 3.0);
  const double g2 = moment_abs_g(p, 2.0);
  const double marginal = es_m * g2 / es_2;
  return es_m / es_4 * g2 * g2 - marginal * marginal;
}

double f_rotated_from_moments(const LpSpace& space) {
  space.validate();
  const double p = space.p;
  const int m = space.n + 1;
  const double es_m = moment_S(p, m, p - 1.0);
  const double es_2 = moment_S(p, m, p + 1.0);
  const double es_4 = moment_S(p, m, p + 3.0);
  const double g2 = moment_abs_g(p, 2.0);
  const double g4 = moment_abs_g(p, 4.0);
  const double marginal = es_m * g2 / es_2;
  return es_m / (2.0 * es_4) * (g4 - g2 * g2) - marginal * marginal;
}

FBallDecomposition ball_decomposition(const LpSpace& space) {
  const double fc = f_canonical(space);
  const double fr = f_rotated(space);
  return {fc, fr, 2.0 * (fr - fc)};
}

double f_ball(const LpSpace& space, double overlap_t) {
  // Overlaps computed from unit vectors can overshoot 1/2 by a few ulps.
  constexpr double kSlack = 1e-12;
  if (!(overlap_t >= -kSlack && overlap_t <= 0.5 + kSlack)) {
    throw RangeError("overlap t must lie in [0, 1/2], got " + std::to_string(overlap_t));
  }
  const FBallDecomposition d = ball_decomposition(space);
  return d.f_canonical + d.slope * std::clamp(overlap_t, 0.0, 0.5);
}

double excess_kurtosis_term(double p) {
  require_p(p);
  return std::exp(2.0 * (log_gamma(3.0 / p) - log_gamma(1.0 / p))) * gurland_F_minus_3(1.0 / p);
}

double ratio_coefficient_diag_gamma_form(const LpSpace& space) {
  space.validate(kMinDiagonalDimension);
  const double p = space.p;
  const double n = space.n;
  const double num[] = {1.0 + (n - 1.0) / p, 1.0 + (n + 3.0) / p};
  const double den[] = {1.0 + (n + 1.0) / p, 1.0 + (n + 1.0) / p};
  return std::exp(log_gamma_ratio(num, den));
}

double ratio_coefficient_diag(const LpSpace& space) {
  space.validate(kMinDiagonalDimension);
  const double p = space.p;
  const int m = space.n;
  const double raw = std::exp(log_moment_S(p, m, p - 1.0) + log_moment_S(p, m, p + 3.0) -
                              2.0 * log_moment_S(p, m, p + 1.0));
  const double reduced = ratio_coefficient_diag_gamma_form(space);
  // The raw form subtracts lgamma values of size (m/p) ln(m/p).
  const double scale = std::abs(log_gamma(1.0 + (m + p + 3.0) / p));
  const double tol = std::max(1e-10, 64.0 * std::numeric_limits<double>::epsilon() * scale);
  if (std::abs(raw - reduced) > tol * std::abs(reduced)) {
    throw InvariantError("ratio_coefficient_diag: raw-moment form " + std::to_string(raw) +
                         " disagrees with Gamma form " + std::to_string(reduced));
  }
  return reduced;
}

Sign f_rotated_sign(const LpSpace& space) {
  space.validate();
  const double b = rotated_bracket(space);
  if (b > kBracketZeroTolerance) return Sign::positive;
  if (b < -kBracketZeroTolerance) return Sign::negative;
  return Sign::zero;
}

ThresholdScan n0_threshold(double p, int n_max) {
  require_p(p);
  if (p >= 2.0) {
    throw DomainError("n0_threshold: the positive-f claim is only made for 1 <= p < 2");
  }
  if (n_max < 2) throw DomainError("n0_threshold: n_max must be >= 2");

  ThresholdScan scan{p, n_max, std::nullopt, {}};
  Sign previous = f_rotated_sign({p, 2});
  if (previous == Sign::positive) scan.n0 = 2;
  for (int n = 3; n <= n_max; ++n) {
    const Sign current = f_rotated_sign({p, n});
    if (current != previous) scan.sign_changes.push_back(n);
    if (current == Sign::positive && !scan.n0) scan.n0 = n;
    previous = current;
  }
  return scan;
}

}  // namespace snc
