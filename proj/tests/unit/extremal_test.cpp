#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "snc/errors.hpp"
#include "snc/extremal.hpp"

namespace {

using namespace snc;

TEST(Extremal, StatedBounds) {
  EXPECT_EQ(overlap_bound(PairMode::sphere), 0.5);
  EXPECT_EQ(overlap_bound(PairMode::diagonal), 0.25);
}

TEST(Extremal, DiagonalMaximizerOverlap) {
  for (int n : {4, 5, 6, 10, 50, 200}) {
    const auto pair = diagonal_overlap_maximizer(n);
    EXPECT_EQ(pair.mode(), PairMode::diagonal);
    EXPECT_NEAR(overlap_t(pair), 0.5 - 1.0 / n, 1e-13) << n;
    EXPECT_EQ(diagonal_overlap_supremum(n), 0.5 - 1.0 / n);
    EXPECT_LT(stationarity_residual(pair, PairMode::diagonal), 1e-12) << n;
  }
}

// Direct check of the witness: a = (e1-e2)/sqrt2, b = e1+e2-(2/n)1 normalized.
TEST(Extremal, WitnessByHand) {
  const int n = 10;
  std::vector<double> a(n, 0.0), b(n, -2.0 / n);
  a[0] = 1 / std::sqrt(2.0);
  a[1] = -a[0];
  b[0] += 1;
  b[1] += 1;
  const double norm = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
  for (double& x : b) x /= norm;
  const OrthoPair pair(a, b, PairMode::diagonal);
  EXPECT_NEAR(overlap_t(pair), 0.4, 1e-14);
}

TEST(Extremal, SphereOptimumIsOneHalf) {
  for (int n : {2, 3, 10, 50}) {
    const auto r = maximize_overlap(n, PairMode::sphere, 8, 11);
    EXPECT_NEAR(r.best_value, 0.5, 1e-9) << n;
    EXPECT_LE(r.best_value, 0.5 + 1e-12);
    EXPECT_LT(r.stationarity_residual, 1e-6);
    EXPECT_EQ(r.restarts, 8);
    EXPECT_EQ(r.restart_values.size(), 8u);
    // Ties within 1e-12 go to the earlier restart.
    EXPECT_NEAR(*std::max_element(r.restart_values.begin(), r.restart_values.end()), r.best_value, 1e-12);
  }
}

TEST(Extremal, DiagonalOptimumMatchesSupremum) {
  for (int n : {4, 5, 6, 10}) {
    const auto r = maximize_overlap(n, PairMode::diagonal, 8, 13);
    EXPECT_NEAR(r.best_value, 0.5 - 1.0 / n, 1e-9) << n;
    EXPECT_NEAR(overlap_t(r.best_pair), r.best_value, 1e-14);
    const auto& e1 = r.best_pair.eta1();
    EXPECT_NEAR(std::accumulate(e1.begin(), e1.end(), 0.0), 0.0, 1e-12);
  }
}

TEST(Extremal, Deterministic) {
  const auto a = maximize_overlap(7, PairMode::diagonal, 4, 99);
  const auto b = maximize_overlap(7, PairMode::diagonal, 4, 99);
  EXPECT_EQ(a.best_value, b.best_value);
  EXPECT_EQ(a.best_restart, b.best_restart);
  EXPECT_EQ(a.best_pair.eta1(), b.best_pair.eta1());
}

TEST(Extremal, StationarityOfKnownPairs) {
  EXPECT_LT(stationarity_residual(OrthoPair::rotated(5), PairMode::sphere), 1e-14);
  EXPECT_LT(stationarity_residual(OrthoPair::canonical(5), PairMode::sphere), 1e-14);
  EXPECT_LT(stationarity_residual(OrthoPair::diagonal_xi(8), PairMode::diagonal), 1e-14);
  Xoshiro256pp rng(5);
  const auto random = OrthoPair::random(8, PairMode::diagonal, rng);
  EXPECT_GT(stationarity_residual(random, PairMode::diagonal), 1e-4);
}

TEST(Extremal, MultiplierFitRecoversRotatedPair) {
  const auto pair = OrthoPair::rotated(4);
  const auto fit = fit_multipliers(pair.eta1(), pair.eta2(), PairMode::sphere);
  EXPECT_LT(fit.residual, 1e-14);
  EXPECT_EQ(fit.c, 0.0);
  EXPECT_EQ(fit.c2, 0.0);
}

TEST(Extremal, BruteForceAgrees) {
  for (int n : {2, 3, 4}) EXPECT_NEAR(brute_force_overlap_max(n, PairMode::sphere, 200), 0.5, 1e-12) << n;
  for (int n : {4, 5, 6})
    EXPECT_NEAR(brute_force_overlap_max(n, PairMode::diagonal, 200), 0.5 - 1.0 / n, 1e-12) << n;
  EXPECT_THROW(brute_force_overlap_max(7, PairMode::sphere, 10), std::exception);
}

TEST(Extremal, MagnitudeClusters) {
  const auto c = magnitude_clusters({0.5, -0.5, 0.5 + 1e-12, 1e-15, 0.1}, 1e-9, 1e-8);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_NEAR(c[0], 0.1, 1e-12);
  EXPECT_NEAR(c[1], 0.5, 1e-11);
}

}  // namespace
