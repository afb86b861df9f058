#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "snc/errors.hpp"
#include "snc/moments.hpp"
#include "snc/rng.hpp"
#include "snc/sampler.hpp"

namespace {

using namespace snc;

struct Stats {
  double mean = 0.0;
  double se = 0.0;
};

Stats stats(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  Xoshiro256pp a = SeededStream{7, 3}.engine();
  Xoshiro256pp b = SeededStream{7, 3}.engine();
  Xoshiro256pp c = SeededStream{7, 4}.engine();
  Xoshiro256pp d = SeededStream{8, 3}.engine();
  int same_c = 0, same_d = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    same_c += x == c();
    same_d += x == d();
  }
  EXPECT_LT(same_c, 2);
  EXPECT_LT(same_d, 2);
  const SeededStream base{7, 3};
  EXPECT_NE(base.substream(1).stream_index, base.substream(2).stream_index);
}

TEST(Rng, UniformOpenAndNormal) {
  Xoshiro256pp r(11);
  std::vector<double> u, z;
  for (int i = 0; i < 200000; ++i) {
    const double x = r.uniform_open();
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 1.0);
    u.push_back(x);
    z.push_back(r.normal());
  }
  EXPECT_NEAR(stats(u).mean, 0.5, 4 * stats(u).se);
  EXPECT_NEAR(stats(z).mean, 0.0, 4 * stats(z).se);
  std::vector<double> z2;
  for (double x : z) z2.push_back(x * x);
  EXPECT_NEAR(stats(z2).mean, 1.0, 4 * stats(z2).se);
}

TEST(Gamma, MeanAndVariance) {
  Xoshiro256pp r(5);
  for (double shape : {0.125, 0.5, 1.0, 2.5, 9.0}) {
    std::vector<double> x, x2;
    for (int i = 0; i < 200000; ++i) {
      const double g = sample_gamma(shape, r);
      ASSERT_GT(g, 0.0);
      x.push_back(g);
      x2.push_back((g - shape) * (g - shape));
    }
    EXPECT_NEAR(stats(x).mean, shape, 4 * stats(x).se) << shape;
    EXPECT_NEAR(stats(x2).mean, shape, 4 * stats(x2).se) << shape;
  }
  EXPECT_THROW(sample_gamma(0.0, r), DomainError);
  EXPECT_THROW(sample_gamma(-1.0, r), DomainError);
}

TEST(SampleG, Moments) {
  const auto g2 = sample_g(2.0, {1, 0}, 1000000);
  std::vector<double> sq;
  for (double x : g2) sq.push_back(x * x);
  EXPECT_NEAR(stats(sq).mean, moment_abs_g(2.0, 2.0), 4 * stats(sq).se);

  const auto g1 = sample_g(1.0, {2, 0}, 1000000);
  std::vector<double> ab, sg;
  for (double x : g1) {
    ab.push_back(std::abs(x));
    sg.push_back(x > 0 ? 1.0 : -1.0);
  }
  EXPECT_NEAR(stats(ab).mean, 1.0, 4 * stats(ab).se);
  EXPECT_NEAR(stats(sg).mean, 0.0, 4 * stats(sg).se);
  EXPECT_THROW(sample_g(0.5, {1, 0}, 10), DomainError);
}

// W = |g|^p should be Gamma(1/p, 1); KS statistic against the critical value
// at significance 1e-3 (sqrt(N) D > 1.9495).
TEST(SampleG, KolmogorovSmirnovOfPowerP) {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    auto g = sample_g(p, {99, static_cast<std::uint64_t>(p * 10)}, 100000);
    std::vector<double> w;
    for (double x : g) w.push_back(std::pow(std::abs(x), p));
    std::sort(w.begin(), w.end());
    const double n = static_cast<double>(w.size());
    double d = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double cdf = boost::math::gamma_p(1.0 / p, w[i]);
      d = std::max({d, (i + 1) / n - cdf, cdf - i / n});
    }
    EXPECT_LT(std::sqrt(n) * d, 1.9495) << p;
  }
}

TEST(GBatch, StoredValuesMatchRows) {
  for (double p : {1.0, 1.7, 2.0, 4.0}) {
    const GBatch b = sample_gbatch(p, 9, {3, 0}, 2000, true);
    EXPECT_FALSE(b.normalized);
    EXPECT_EQ(b.draws.rows, 2000u);
    EXPECT_LE(b.max_s_deviation(), 1e-12);
    EXPECT_LE(b.max_psi_deviation(), 1e-12);
  }
}

TEST(Psi, Examples) {
  const std::vector<double> row{0.3, 2.0, -1.0, -0.01};
  EXPECT_EQ(psi_theta0(row, 1.0), 0.0);
  const std::vector<double> r2{0.3, -2.0, 1.1};
  EXPECT_NEAR(psi_theta0(r2, 2.0), std::abs(0.3 - 2.0 + 1.1) / std::sqrt(3.0), 1e-15);
}

TEST(Cone, RowsOnTheSphere) {
  for (double p : {1.0, 2.5}) {
    const GBatch b = sample_cone(p, 6, {4, 1}, 5000);
    EXPECT_TRUE(b.normalized);
    for (std::size_t k = 0; k < b.draws.rows; ++k) ASSERT_NEAR(lp_norm(b.draws.row(k), p), 1.0, 1e-12);
  }
  EXPECT_THROW(sample_cone(2.0, 1, {1, 1}, 10), DomainError);
}

TEST(Cone, QuadrantsUniformAtPOne) {
  const GBatch b = sample_cone(1.0, 2, {8, 0}, 400000);
  std::vector<double> count(4, 0.0);
  for (std::size_t k = 0; k < b.draws.rows; ++k) {
    const auto r = b.draws.row(k);
    count[(r[0] > 0 ? 0 : 1) + (r[1] > 0 ? 0 : 2)] += 1.0;
  }
  const double n = static_cast<double>(b.draws.rows);
  const double se = std::sqrt(0.25 * 0.75 / n);
  for (double c : count) EXPECT_NEAR(c / n, 0.25, 4 * se);
}

TEST(Cone, RadiusIndependentOfDirection) {
  for (double p : {1.0, 3.0}) {
    const GBatch b = sample_cone(p, 5, {12, 0}, 200000);
    std::vector<double> s = b.s_values, x;
    for (std::size_t k = 0; k < b.draws.rows; ++k) x.push_back(std::abs(b.draws.row(k)[0]));
    const Stats ss = stats(s), sx = stats(x);
    std::vector<double> prod;
    for (std::size_t k = 0; k < s.size(); ++k) prod.push_back((s[k] - ss.mean) * (x[k] - sx.mean));
    const Stats cov = stats(prod);
    EXPECT_NEAR(cov.mean, 0.0, 4 * cov.se) << p;
  }
}

TEST(BallUniform, MembershipAndMoments) {
  const RowMatrix m = sample_ball_uniform(2.0, 3, {21, 0}, 300000);
  std::vector<double> x1, x1sq;
  for (std::size_t k = 0; k < m.rows; ++k) {
    ASSERT_LE(lp_norm(m.row(k), 2.0), 1.0);
    x1.push_back(m.row(k)[0]);
    x1sq.push_back(m.row(k)[0] * m.row(k)[0]);
  }
  EXPECT_NEAR(stats(x1sq).mean, 0.2, 4 * stats(x1sq).se);
  EXPECT_NEAR(stats(x1).mean, 0.0, 4 * stats(x1).se);

  const RowMatrix q = sample_ball_uniform(1.5, 6, {22, 0}, 300000);
  std::vector<double> y;
  for (std::size_t k = 0; k < q.rows; ++k) {
    ASSERT_LE(lp_norm(q.row(k), 1.5), 1.0 + 1e-12);
    y.push_back(q.row(k)[2] * q.row(k)[2]);
  }
  EXPECT_NEAR(stats(y).mean, mean_square_marginal_ball({1.5, 6}), 4 * stats(y).se);
}

TEST(WeightedProjection, ConstantIntegrandIsExact) {
  std::vector<double> theta(5, 1.0 / std::sqrt(5.0));
  McConfig cfg{20000, 1, 1};
  const auto r = weighted_projection_expectation(1.5, theta, [](std::span<const double>) { return 1.0; }, cfg);
  EXPECT_EQ(r.estimate.mean, 1.0);
  EXPECT_GT(r.weight_mean, 0.0);
}

TEST(WeightedProjection, BallMarginalThroughExtraCoordinate) {
  for (double p : {1.0, 3.0}) {
    const int n = 6;
    std::vector<double> theta(n + 1, 0.0);
    theta[n] = 1.0;
    McConfig cfg{400000, 17, 1};
    const auto r = weighted_projection_expectation(
        p, theta, [](std::span<const double> x) { return (x[0] + x[1]) * (x[0] + x[1]) / 2.0; }, cfg);
    EXPECT_NEAR(r.estimate.mean, mean_square_marginal_ball({p, n}), 4 * r.estimate.std_error) << p;
  }
}

TEST(WeightedProjection, PointsLieInThetaPerp) {
  const int n = 7;
  std::vector<double> theta(n, 1.0 / std::sqrt(double(n)));
  McConfig cfg{20000, 2, 1};
  const auto r = weighted_projection_expectation(
      2.5, theta,
      [&](std::span<const double> x) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += x[i] * theta[i];
        return std::abs(d) < 1e-12 ? 1.0 : 0.0;
      },
      cfg);
  EXPECT_EQ(r.estimate.mean, 1.0);
}

TEST(WeightedProjection, DiagonalMarginalIndependentOfDirection) {
  const int n = 8;
  std::vector<double> theta(n, 1.0 / std::sqrt(double(n)));
  auto f1 = [](std::span<const double> x) { return (x[0] - x[1]) * (x[0] - x[1]) / 2.0; };
  auto f2 = [](std::span<const double> x) {
    const double v = (x[2] + x[3] + x[4] - 3 * x[5]) / std::sqrt(12.0);
    return v * v;
  };
  const auto a = weighted_projection_expectation(1.0, theta, f1, {300000, 4, 1});
  const auto b = weighted_projection_expectation(1.0, theta, f2, {300000, 5, 1});
  EXPECT_NEAR(a.estimate.mean, b.estimate.mean, 4 * std::hypot(a.estimate.std_error, b.estimate.std_error));
}

TEST(WeightedProjection, RejectsNonUnitTheta) {
  std::vector<double> theta(4, 0.5);
  theta[0] = 0.6;
  EXPECT_THROW(weighted_projection_expectation(2.0, theta, [](std::span<const double>) { return 1.0; }, {20000, 1, 1}),
               std::invalid_argument);
}

TEST(Determinism, IndependentOfThreadCount) {
  std::vector<double> theta(4, 0.5);
  auto f = [](std::span<const double> x) { return x[0] * x[0] * x[1] * x[1]; };
  const auto a = weighted_projection_expectation(1.5, theta, f, {300000, 9, 1});
  const auto b = weighted_projection_expectation(1.5, theta, f, {300000, 9, 3});
  const auto c = weighted_projection_expectation(1.5, theta, f, {300000, 9, 1});
  EXPECT_EQ(a.estimate.mean, b.estimate.mean);
  EXPECT_EQ(a.estimate.std_error, b.estimate.std_error);
  EXPECT_EQ(a.estimate.mean, c.estimate.mean);
}

}  // namespace
