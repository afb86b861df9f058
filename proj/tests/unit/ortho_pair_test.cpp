#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "snc/errors.hpp"
#include "snc/ortho_pair.hpp"

namespace {

using namespace snc;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double sum(const std::vector<double>& a) { return std::accumulate(a.begin(), a.end(), 0.0); }

void expect_feasible(const OrthoPair& p) {
  EXPECT_NEAR(dot(p.eta1(), p.eta1()), 1.0, 1e-12);
  EXPECT_NEAR(dot(p.eta2(), p.eta2()), 1.0, 1e-12);
  EXPECT_NEAR(dot(p.eta1(), p.eta2()), 0.0, 1e-12);
  if (p.mode() == PairMode::diagonal) {
    EXPECT_NEAR(sum(p.eta1()), 0.0, 1e-12);
    EXPECT_NEAR(sum(p.eta2()), 0.0, 1e-12);
  }
}

TEST(OrthoPair, ModeNames) {
  EXPECT_EQ(to_string(PairMode::sphere), "sphere");
  EXPECT_EQ(parse_pair_mode("diagonal"), PairMode::diagonal);
  EXPECT_THROW(parse_pair_mode("cube"), ValidationError);
}

TEST(OrthoPair, NamedPairsAndOverlaps) {
  EXPECT_EQ(overlap_t(OrthoPair::canonical(5)), 0.0);
  EXPECT_NEAR(overlap_t(OrthoPair::rotated(5)), 0.5, 1e-15);
  EXPECT_NEAR(overlap_t(OrthoPair::diagonal_xi_bar(6)), 0.0, 1e-15);
  EXPECT_NEAR(overlap_t(OrthoPair::diagonal_xi(6)), 0.25, 1e-15);
  for (const auto& p : {OrthoPair::canonical(4, 1, 3), OrthoPair::rotated(4, 0, 2), OrthoPair::diagonal_xi(8, 4),
                        OrthoPair::diagonal_xi_bar(8, 2)})
    expect_feasible(p);
  EXPECT_THROW(OrthoPair::diagonal_xi(4, 1), std::exception);
}

TEST(OrthoPair, OverlapFamilies) {
  for (double t : {0.0, 0.03, 0.1, 0.2, 0.25}) {
    const auto d = OrthoPair::diagonal_with_overlap(7, t, 2);
    expect_feasible(d);
    EXPECT_NEAR(overlap_t(d), t, 1e-13);
  }
  for (double t : {0.0, 0.1, 0.37, 0.5}) {
    const auto s = OrthoPair::sphere_with_overlap(4, t, 1, 3);
    expect_feasible(s);
    EXPECT_NEAR(overlap_t(s), t, 1e-13);
  }
  EXPECT_THROW(OrthoPair::diagonal_with_overlap(6, 0.3), std::exception);
  EXPECT_THROW(OrthoPair::sphere_with_overlap(6, -0.1), std::exception);
}

TEST(OrthoPair, ValidationNamesTheViolation) {
  const std::vector<double> a{1, 0, 0}, b{1, 0, 0}, c{0, 2, 0}, d{0, 1, 0};
  EXPECT_NE(OrthoPair::check(a, b, PairMode::sphere), "");
  EXPECT_NE(OrthoPair::check(a, c, PairMode::sphere), "");
  EXPECT_EQ(OrthoPair::check(a, d, PairMode::sphere), "");
  EXPECT_NE(OrthoPair::check(a, d, PairMode::diagonal), "");
  EXPECT_THROW(OrthoPair(a, b, PairMode::sphere), ValidationError);
  EXPECT_THROW(OrthoPair({1, 0}, {0, 1, 0}, PairMode::sphere), ValidationError);
  const double nan = std::nan("");
  EXPECT_NE(OrthoPair::check({nan, 0, 0}, d, PairMode::sphere), "");
}

TEST(OrthoPair, RandomPairsAreFeasible) {
  Xoshiro256pp rng(3);
  for (int n : {2, 3, 10, 40}) expect_feasible(OrthoPair::random(n, PairMode::sphere, rng));
  for (int n : {4, 5, 17}) expect_feasible(OrthoPair::random(n, PairMode::diagonal, rng));
}

TEST(OrthoPair, PermutationPreservesOverlap) {
  Xoshiro256pp rng(4);
  const auto p = OrthoPair::random(6, PairMode::diagonal, rng);
  const auto q = p.permuted({5, 3, 1, 0, 2, 4});
  EXPECT_NEAR(overlap_t(p), overlap_t(q), 1e-15);
  EXPECT_EQ(q.eta1()[0], p.eta1()[5]);
  EXPECT_THROW(p.permuted({0, 0, 1, 2, 3, 4}), std::exception);
}

TEST(OrthoPair, Orthonormalize) {
  std::vector<double> a{1, 2, 3, 4}, b{0, 1, 0, 1};
  ASSERT_TRUE(orthonormalize(a, b, PairMode::diagonal));
  expect_feasible(OrthoPair(a, b, PairMode::diagonal));
  std::vector<double> c{1, 1, 1}, d{0, 1, 0};
  EXPECT_FALSE(orthonormalize(c, d, PairMode::diagonal));
}

}  // namespace
