#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "snc/mc_driver.hpp"
#include "snc/rng.hpp"

namespace snc {

// Exact sampler for g with density exp(-|t|^p) / (2 Gamma(1+1/p)).
// |g| = W^{1/p} with W ~ Gamma(1/p, 1), sign uniform.
class GeneralizedGaussian {
 public:
  explicit GeneralizedGaussian(double p);

  struct Draw {
    double value;        // g
    double abs_pow_p;    // |g|^p
    double abs_pow_pm1;  // |g|^{p-1}; exactly 1 when p == 1
  };

  double p() const noexcept { return p_; }

  Draw draw(Xoshiro256pp& rng) const noexcept;
  double operator()(Xoshiro256pp& rng) const noexcept { return draw(rng).value; }

 private:
  enum class Kind { laplace, gaussian, general };

  double gamma_boosted(Xoshiro256pp& rng) const noexcept;

  double p_;
  double inv_p_;
  Kind kind_;
  // Marsaglia-Tsang constants for shape 1 + 1/p.
  double mt_d_;
  double mt_c_;
};

// Dense row-major matrix; one row per sample.
struct RowMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RowMatrix() = default;
  RowMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t k) { return {data.data() + k * cols, cols}; }
  std::span<const double> row(std::size_t k) const { return {data.data() + k * cols, cols}; }
};

// A batch of m-dimensional draws of (g_1, ..., g_m).
//
// When `normalized` is false, `draws` holds the raw g rows and s_values[k]
// is the l_p norm of row k. When true, rows have been divided by their S
// (points on the boundary under the cone measure) and s_values keeps the S
// that was divided out. psi_values, when filled, holds
// (1/sqrt m) |sum_i sign(g_i) |g_i|^{p-1}| for each row.
struct GBatch {
  RowMatrix draws;
  double p = 1.0;
  bool normalized = false;
  std::vector<double> s_values;
  std::vector<double> psi_values;

  // Max relative deviation of the stored S / psi from values recomputed from
  // the rows.
  double max_s_deviation() const;
  double max_psi_deviation() const;
};

double lp_norm(std::span<const double> x, double p);

/// psi_{theta0} of a raw row: (1/sqrt m) |sum_i sign(g_i) |g_i|^{p-1}|.
double psi_theta0(std::span<const double> row, double p);

std::vector<double> sample_g(double p, const SeededStream& stream, std::size_t count);

/// Raw g rows with S and (optionally) psi.
GBatch sample_gbatch(double p, int m, const SeededStream& stream, std::size_t batch, bool with_psi);

/// Rows G/S, distributed on the boundary of B_p^m under the cone measure.
GBatch sample_cone(double p, int m, const SeededStream& stream, std::size_t batch);

/// Rows uniform on B_p^n: cone point scaled by U^{1/n}.
RowMatrix sample_ball_uniform(double p, int n, const SeededStream& stream, std::size_t batch);

using PointFunction = std::function<double(std::span<const double>)>;

struct RatioEstimate {
  McEstimate estimate;        // E f(X), delta-method standard error
  double weight_mean = 0.0;   // mean of w
  double weight_std_error = 0.0;
};

/// E f(X) for X uniform on the projection of B_p^n onto theta-perp, estimated
/// as E[f(P(G/S)) w] / E[w] with
/// w = |sum_i |g_i|^{p-1} / S^{p-1} sign(g_i) theta_i|.
/// Throws UnstableEstimateError when mean(w) < 3 SE(w).
RatioEstimate weighted_projection_expectation(double p, std::span<const double> theta,
                                              const PointFunction& f, const McConfig& cfg);

}  // namespace snc
