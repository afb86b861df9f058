#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "snc/errors.hpp"
#include "snc/moments.hpp"
#include "snc/sncp_mc.hpp"

namespace {

using namespace snc;

double z(const McEstimate& a, double exact) { return (a.mean - exact) / a.std_error; }
double z(const McEstimate& a, const McEstimate& b) {
  return (a.mean - b.mean) / joint_std_error(a.std_error, b.std_error);
}

// f for any orthonormal pair on the Euclidean ball of dimension m.
double euclidean_f(int m) {
  return oracle::euclidean_ball_x1_sq_x2_sq(m) - std::pow(oracle::euclidean_ball_x1_sq(m), 2);
}

TEST(Verdict, Rules) {
  McEstimate e;
  e.mean = -1.0;
  e.std_error = 0.2;
  EXPECT_EQ(sign_verdict(e), SignVerdict::negative);
  e.std_error = 0.3;
  EXPECT_EQ(sign_verdict(e), SignVerdict::indeterminate);
  e.mean = 2.0;
  EXPECT_EQ(sign_verdict(e), SignVerdict::positive);
  EXPECT_EQ(sign_verdict(-1e-300), SignVerdict::negative);
  EXPECT_EQ(sign_verdict(0.0), SignVerdict::indeterminate);
  EXPECT_EQ(to_string(SignVerdict::negative), "negative");
  EXPECT_EQ(to_string(ExtremalPair::xi_bar), "xi_bar");
}

TEST(Seeds, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s : {0u, 1u, 42u})
    for (std::uint64_t k = 0; k < 100; ++k) seen.insert(derive_seed(s, k));
  EXPECT_EQ(seen.size(), 300u);
  EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
}

TEST(Identities, HoldOnRandomDiagonalPairs) {
  Xoshiro256pp rng(1);
  for (int n : {4, 5, 9, 20}) {
    for (int k = 0; k < 5; ++k) {
      const auto pair = OrthoPair::random(n, PairMode::diagonal, rng);
      const auto r = algebraic_identities_check(pair);
      EXPECT_NEAR(r.overlap, overlap_t(pair), 1e-15);
      EXPECT_LT(r.max_residual(), 1e-12) << n;
    }
  }
  EXPECT_THROW(algebraic_identities_check(OrthoPair::canonical(5)), PreconditionError);
}

TEST(BallMc, EuclideanClosedForm) {
  const McConfig cfg{400000, 3, 1};
  for (int n : {3, 6}) {
    const auto w = f_ball_mc(2.0, OrthoPair::canonical(n), cfg, BallBackend::weighted);
    const auto u = f_ball_mc(2.0, OrthoPair::rotated(n), cfg, BallBackend::uniform);
    EXPECT_LT(std::abs(z(w, euclidean_f(n))), 4.0) << n;
    EXPECT_LT(std::abs(z(u, euclidean_f(n))), 4.0) << n;
  }
}

TEST(BallMc, BackendsAgreeWithExact) {
  Xoshiro256pp rng(2);
  const McConfig cfg{400000, 5, 1};
  for (double p : {1.0, 1.5, 3.0}) {
    const auto pair = OrthoPair::random(4, PairMode::sphere, rng);
    const double exact = f_ball({p, 4}, overlap_t(pair));
    const auto w = f_ball_mc(p, pair, cfg, BallBackend::weighted);
    const auto u = f_ball_mc(p, pair, cfg, BallBackend::uniform);
    EXPECT_LT(std::abs(z(w, exact)), 4.0) << p;
    EXPECT_LT(std::abs(z(u, exact)), 4.0) << p;
    EXPECT_EQ(w.samples, 400000u);
    EXPECT_EQ(w.method, "mc-weighted");
  }
}

TEST(BallMc, RejectsTooFewSamples) {
  EXPECT_THROW(f_ball_mc(2.0, OrthoPair::canonical(3), {10, 1, 1}, BallBackend::uniform), PreconditionError);
}

// The diagonal projection of the Euclidean ball is a Euclidean ball of one
// dimension less.
TEST(DiagMc, EuclideanClosedForm) {
  const McConfig cfg{400000, 8, 1};
  for (int n : {5, 8}) {
    const auto e = f_diag_mc(2.0, OrthoPair::diagonal_xi(n), cfg);
    EXPECT_LT(std::abs(z(e, euclidean_f(n - 1))), 4.0) << n;
    EXPECT_NEAR(euclidean_f(n - 1), -2.0 / ((n + 1.0) * (n + 1.0) * (n + 3.0)), 1e-15);
    const auto x = f_diag_extremal_values(2.0, n, ExtremalPair::xi_bar, cfg);
    EXPECT_LT(std::abs(z(x, euclidean_f(n - 1))), 4.0) << n;
  }
  EXPECT_THROW(f_diag_mc(2.0, OrthoPair::rotated(5), cfg), PreconditionError);
}

TEST(DiagMc, ExtremalRouteMatchesDirectRoute) {
  const McConfig cfg{300000, 9, 1};
  for (double p : {1.0, 3.0}) {
    for (auto which : {ExtremalPair::xi_bar, ExtremalPair::xi}) {
      const auto pair = which == ExtremalPair::xi ? OrthoPair::diagonal_xi(8) : OrthoPair::diagonal_xi_bar(8);
      const auto direct = f_diag_mc(p, pair, cfg);
      const auto values = f_diag_extremal_values(p, 8, which, cfg);
      EXPECT_LT(std::abs(z(direct, values)), 4.0) << p << " " << to_string(which);
    }
  }
}

TEST(DiagMc, ThreadInvariant) {
  const auto a = f_diag_mc(1.5, OrthoPair::diagonal_xi(6), {200000, 4, 1});
  const auto b = f_diag_mc(1.5, OrthoPair::diagonal_xi(6), {200000, 4, 3});
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(ExtremalH, ClosedFormMeans) {
  const McConfig cfg{1000000, 12, 1};
  for (double p : {1.0, 2.0, 3.5}) {
    for (auto which : {ExtremalPair::xi_bar, ExtremalPair::xi}) {
      const auto mc = extremal_h_mean_mc(p, 10, which, cfg);
      EXPECT_LT(std::abs(z(mc, extremal_h_mean(p, 10, which))), 4.0) << p << " " << to_string(which);
    }
  }
  // E (x1-x2)^2(x3-x4)^2/4 and the xi main term from raw moments.
  const double p = 1.0, m2 = oracle::abs_moment(p, 2), m4 = oracle::abs_moment(p, 4);
  const double c = ratio_coefficient_diag({p, 10});
  EXPECT_NEAR(extremal_h_mean(p, 10, ExtremalPair::xi_bar), m2 * m2 * (1 - c), 1e-10);
  EXPECT_NEAR(extremal_h_mean(p, 10, ExtremalPair::xi), (m4 + m2 * m2) / 4 - c * m2 * m2, 1e-10);
}

TEST(ExtremalH, PointValues) {
  const std::array<double, 6> x{1, 2, 3, 5, 7, 11};
  const double cross = 1 * 49 - 2 * 2 * 49 + 2 * 7 * 11;
  EXPECT_DOUBLE_EQ(extremal_h(ExtremalPair::xi_bar, 0.5, x), 0.25 * 1 * 4 - 0.5 * cross);
  const double s = 1 - 2 + 3 - 5, r = 1 - 2 - 3 + 5;
  EXPECT_DOUBLE_EQ(extremal_h(ExtremalPair::xi, 0.5, x), s * s * r * r / 16 - 0.5 * cross);
}

TEST(Affine, Preconditions) {
  const McConfig cfg{20000, 1, 1};
  const std::vector<OrthoPair> two{OrthoPair::diagonal_xi(8), OrthoPair::diagonal_xi_bar(8),
                                   OrthoPair::diagonal_xi(8, 4)};
  EXPECT_THROW(diag_affine_decomposition_check(2.0, two, cfg), PreconditionError);
  EXPECT_THROW(diag_affine_decomposition_check(2.0, {}, cfg), PreconditionError);
  const std::vector<OrthoPair> mixed{OrthoPair::diagonal_xi(8), OrthoPair::diagonal_xi(10)};
  EXPECT_THROW(diag_affine_decomposition_check(2.0, mixed, cfg), PreconditionError);
}

TEST(Affine, FitIsConsistent) {
  std::vector<OrthoPair> pairs;
  for (double t : {0.0, 0.08, 0.16, 0.25}) pairs.push_back(OrthoPair::diagonal_with_overlap(12, t));
  const auto r = diag_affine_decomposition_check(3.0, pairs, {200000, 21, 1});
  ASSERT_EQ(r.points.size(), 4u);
  EXPECT_NEAR(r.quarter_value, r.intercept + r.slope / 4, 1e-15);
  EXPECT_TRUE(r.intercept_ok());
  EXPECT_TRUE(r.quarter_ok());
}

TEST(MarginalDiag, EuclideanValue) {
  const auto r = mean_square_marginal_diag(2.0, 7, {300000, 5, 1});
  const double exact = oracle::euclidean_ball_x1_sq(6);
  EXPECT_LT(std::abs(z(r.formula_route, exact)), 4.0);
  EXPECT_LT(std::abs(z(r.direct_route, exact)), 4.0);
  EXPECT_LT(std::abs(r.route_z), 4.0);
  EXPECT_LT(std::abs(r.direction_z), 4.0);
}

TEST(Splitting, QuarticValues) {
  const std::vector<double> g{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quartic_h(g), 1 - 4 * 2 - 3 * 4 + 12 * 6 - 6 * 24);
}

TEST(Splitting, IdentityHolds) {
  const McConfig cfg{200000, 31, 1};
  for (double p : {1.0, 2.5}) {
    const auto r = splitting_identity_check(4, p, 20, [](std::span<const double> g) { return quartic_h(g); }, cfg);
    EXPECT_TRUE(r.identity_ok()) << p;
    EXPECT_TRUE(r.bound_ok()) << p;
    EXPECT_LE(std::abs(r.difference.mean), 4 * r.difference.std_error + 1e-15);
  }
}

TEST(Splitting, FourTermExpansion) {
  const auto r = four_term_expansion_check(2.0, 20, ExtremalPair::xi, {200000, 32, 1});
  EXPECT_TRUE(r.identity_ok());
  EXPECT_NEAR(r.rhs.mean, r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3], 1e-10 * (1 + std::abs(r.rhs.mean)));
}

TEST(Psi, PEqualsOneMatchesRandomWalk) {
  const auto s = psi_scaling_survey(16, {1.0, 2.0, 4.0}, {200000, 3, 1});
  ASSERT_EQ(s.rows.size(), 3u);
  EXPECT_LT(std::abs(z(s.rows[0].scaled_mean, oracle::binomial_walk_abs_mean(16))), 4.0);
  EXPECT_GE(s.ratio(), 1.0);
  EXPECT_THROW(psi_scaling_survey(4, {5.0}, {20000, 1, 1}), DomainError);
}

}  // namespace
