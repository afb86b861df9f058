#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "snc/mc_driver.hpp"
#include "snc/ortho_pair.hpp"

namespace snc {

// ---------------------------------------------------------------------------
// Reports

enum class SignVerdict { negative, positive, indeterminate };
enum class SncpMethod { exact_decomposition, mc_weighted, mc_uniform };

std::string to_string(SignVerdict v);
std::string to_string(SncpMethod m);

// Sign rules at the default 4 SE threshold used for every reproduction claim.
inline constexpr double kVerdictSigmas = 4.0;

SignVerdict sign_verdict(const McEstimate& est, double sigmas = kVerdictSigmas);
SignVerdict sign_verdict(double exact_value);

struct SncpReport {
  OrthoPair pair;
  std::variant<double, McEstimate> f_value;
  SignVerdict sign_verdict;
  SncpMethod method;
};

SncpReport make_report(const OrthoPair& pair, double exact_value);
SncpReport make_report(const OrthoPair& pair, const McEstimate& est, SncpMethod method);

// Deterministic child seed for the `index`-th independent sub-run.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// ---------------------------------------------------------------------------
// Sum identities on the diagonal hyperplane. Sums over "i != j != k" run over
// pairwise distinct indices.

struct IdentityResiduals {
  double overlap;
  std::array<double, 6> lhs;
  std::array<double, 6> rhs;
  std::array<double, 6> residual;
  double max_residual() const;
};

IdentityResiduals algebraic_identities_check(const OrthoPair& pair);

// ---------------------------------------------------------------------------
// Monte Carlo estimates of f(eta1, eta2) =
//   E<X,eta1>^2<X,eta2>^2 - E<X,eta1>^2 E<X,eta2>^2.
// All three expectations come from the same draws; the standard error is
// from 32 batch means.

enum class BallBackend { weighted, uniform };

/// X uniform on B_p^n with n = pair.n(). The weighted backend views B_p^n as
/// the projection of B_p^{n+1} onto e_{n+1}-perp.
McEstimate f_ball_mc(double p, const OrthoPair& pair, const McConfig& cfg, BallBackend backend);

/// X uniform on the projection of B_p^n onto the diagonal hyperplane.
McEstimate f_diag_mc(double p, const OrthoPair& pair, const McConfig& cfg);

enum class ExtremalPair { xi_bar, xi };
std::string to_string(ExtremalPair which);

/// The 6-variable integrand whose psi-psibar-weighted mean carries the sign of
/// f at the extremal diagonal pairs. `cross_coefficient` is
/// ratio_coefficient_diag(p, n).
double extremal_h(ExtremalPair which, double cross_coefficient, std::span<const double, 6> x);

/// f(xi_bar) or f(xi) on the diagonal projection as
///   E S^{p-1} E[h psi psibar] / (E S^{p+3} E[psi psibar])
/// with S moments in closed form and two independent g batches.
McEstimate f_diag_extremal_values(double p, int n, ExtremalPair which, const McConfig& cfg);

/// Unweighted E h in closed form (product-form integrand).
double extremal_h_mean(double p, int n, ExtremalPair which);

/// Unweighted E h by sampling, for checking extremal_h_mean.
McEstimate extremal_h_mean_mc(double p, int n, ExtremalPair which, const McConfig& cfg);

// ---------------------------------------------------------------------------

struct AffineFitPoint {
  double t;
  McEstimate f;
};

struct AffineFitReport {
  std::vector<AffineFitPoint> points;
  double intercept = 0.0, intercept_se = 0.0;
  double slope = 0.0, slope_se = 0.0;
  double quarter_value = 0.0, quarter_se = 0.0;  // intercept + slope / 4
  double chi2_per_dof = 0.0;
  McEstimate xi_bar;  // dedicated estimator
  McEstimate xi;      // dedicated estimator
  double intercept_z = 0.0;  // (intercept - xi_bar) / joint SE
  double quarter_z = 0.0;    // (quarter - xi) / joint SE
  SignVerdict slope_sign = SignVerdict::indeterminate;

  bool chi2_ok(double limit = 2.0) const { return chi2_per_dof <= limit; }
  bool intercept_ok(double sigmas = 4.0) const;
  bool quarter_ok(double sigmas = 4.0) const;
};

/// Fits f(t) = a + b t over diagonal pairs (weighted least squares) and
/// compares a and a + b/4 with the dedicated xi_bar / xi estimators.
/// Throws PreconditionError unless the pairs span >= 3 distinct overlaps.
AffineFitReport diag_affine_decomposition_check(double p, const std::vector<OrthoPair>& pairs,
                                                const McConfig& cfg);

struct MarginalDiagReport {
  McEstimate formula_route;  // E S^{p-1} E[g1(g1-g2) psi] / (E S^{p+1} E psi)
  McEstimate direct_route;   // E<X, eta>^2 by weighted projection, random eta
  McEstimate second_direction;
  double route_z = 0.0;      // (formula - direct) / joint SE
  double direction_z = 0.0;  // (direct - second) / joint SE
};

MarginalDiagReport mean_square_marginal_diag(double p, int n, const McConfig& cfg);

// ---------------------------------------------------------------------------
// Splitting identity
//   E h |Y_k + Z| = E h E|Z| + E h (|Y_k| - |Z|) 1{|Y_k| >= |Z|},
// with Y_k = sum_{i<=k} sign(g_i)|g_i|^{p-1} and Z the same sum over a tail.

using TestIntegrand = std::function<double(std::span<const double>)>;

// The quartic g1^4 - 4g1^3g2 - 3g1^2g2^2 + 12g1^2g2g3 - 6g1g2g3g4.
double quartic_h(std::span<const double> g);

struct SplittingReport {
  McEstimate lhs;
  McEstimate rhs;
  McEstimate difference;   // lhs - rhs, batch-means SE on common draws
  McEstimate second_term;  // E h (|Y|-|Z|) 1{|Y|>=|Z|}
  double bound = 0.0;      // sqrt(E h^2) sqrt(E Y^2)
  bool identity_ok(double sigmas = 4.0) const;
  bool bound_ok(double sigmas = 4.0) const;
};

SplittingReport splitting_identity_check(int k, double p, int tail_length, const TestIntegrand& h,
                                         const McConfig& cfg);

/// Nested application: n E h psi psibar expanded into four terms, with
/// (Y_4, Z) from g and (Ybar_2, Zbar) from an independent gbar batch.
struct FourTermReport {
  McEstimate lhs;
  McEstimate rhs;
  McEstimate difference;
  std::array<double, 4> terms{};
  bool identity_ok(double sigmas = 4.0) const;
};

FourTermReport four_term_expansion_check(double p, int n, ExtremalPair which, const McConfig& cfg);

// ---------------------------------------------------------------------------

struct PsiSurveyRow {
  double p;
  McEstimate scaled_mean;  // E psi * sqrt(p)
};

struct PsiSurvey {
  int n = 0;
  std::vector<PsiSurveyRow> rows;
  double min_value = 0.0;
  double max_value = 0.0;
  double ratio() const { return max_value / min_value; }
};

/// Requires 1 <= p <= n for every grid entry.
PsiSurvey psi_scaling_survey(int n, const std::vector<double>& p_grid, const McConfig& cfg);

}  // namespace snc
