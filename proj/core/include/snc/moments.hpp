#pragma once

#include <optional>
#include <vector>

namespace snc {

// Exponent p (1 <= p < inf) together with the ambient dimension n.
struct LpSpace {
  double p;
  int n;

  // Throws DomainError unless 1 <= p < inf and n >= min_n.
  void validate(int min_n = 2) const;
};

// Minimum dimension for anything living on the diagonal hyperplane.
inline constexpr int kMinDiagonalDimension = 4;

// ---------------------------------------------------------------------------
// Moments of the generalized Gaussian g (density exp(-|t|^p) / (2 Gamma(1+1/p)))
// and of S, the l_p norm of m independent copies of g.

/// E|g|^alpha.
double moment_abs_g(double p, double alpha);
double log_moment_abs_g(double p, double alpha);

/// E S^alpha with S built from `m` copies. The number of copies is always
/// explicit: the ball computations use m = n + 1, the diagonal ones m = n.
double moment_S(double p, int m, double alpha);
double log_moment_S(double p, int m, double alpha);

// ---------------------------------------------------------------------------
// Closed forms for X uniform on B_p^n.

/// E<X, eta>^2, identical for every unit vector eta.
double mean_square_marginal_ball(const LpSpace& space);

/// f(e1, e2).
double f_canonical(const LpSpace& space);

/// f(xi1, xi2) with xi = (e1 +- e2) / sqrt 2.
double f_rotated(const LpSpace& space);

/// Same two quantities assembled from moment_abs_g / moment_S (m = n + 1)
/// instead of the simplified Gamma displays. Kept as an independent route.
double f_canonical_from_moments(const LpSpace& space);
double f_rotated_from_moments(const LpSpace& space);

struct FBallDecomposition {
  double f_canonical;
  double f_rotated;
  double slope;  // 2 * (f_rotated - f_canonical)
};

FBallDecomposition ball_decomposition(const LpSpace& space);

/// f(eta1, eta2) for any orthonormal pair with sum_i eta1(i)^2 eta2(i)^2 = t.
/// Throws RangeError if t is outside [0, 1/2].
double f_ball(const LpSpace& space, double overlap_t);

/// E g^4 - 3 (E g^2)^2 = (Gamma(3/p)/Gamma(1/p))^2 (F(1/p) - 3).
double excess_kurtosis_term(double p);

/// E S^{p-1} E S^{p+3} / (E S^{p+1})^2 with m = n copies. Evaluated both from
/// raw moments and from the reduced Gamma form; throws InvariantError if the
/// two disagree by more than 1e-10 relative.
double ratio_coefficient_diag(const LpSpace& space);

/// Reduced Gamma form alone: Gamma(1+(n-1)/p) Gamma(1+(n+3)/p) / Gamma(1+(n+1)/p)^2.
double ratio_coefficient_diag_gamma_form(const LpSpace& space);

// ---------------------------------------------------------------------------

enum class Sign { negative = -1, zero = 0, positive = 1 };

struct ThresholdScan {
  double p;
  int n_max;
  std::optional<int> n0;  // smallest n with f_rotated(p, n) > 0
  // Every n at which the sign class of f_rotated differs from that at n - 1.
  std::vector<int> sign_changes;
};

/// The sign of f_rotated is decided on the bracket F(1/p) - 1 - 2R; values with
/// |bracket| <= this tolerance count as zero.
inline constexpr double kBracketZeroTolerance = 1e-12;

/// Sign of f_rotated(space) with the zero band above.
Sign f_rotated_sign(const LpSpace& space);

/// Linear scan n = 2..n_max for the first positive f_rotated. Requires
/// 1 <= p < 2 (DomainError otherwise).
ThresholdScan n0_threshold(double p, int n_max);

}  // namespace snc
