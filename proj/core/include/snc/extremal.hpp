#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "snc/ortho_pair.hpp"

namespace snc {

// Upper bound of t(eta1, eta2) = sum_i eta1(i)^2 eta2(i)^2 on the feasible set:
// 1/2 for orthonormal pairs, 1/4 when both vectors are also mean zero.
double overlap_bound(PairMode mode);

// The mean-zero pair ((e1-e2)/sqrt2, (e1+e2-(2/n)1)/|.|) has overlap 1/2 - 1/n,
// which equals 1/4 only at n = 4. Numerically it is the diagonal maximum.
OrthoPair diagonal_overlap_maximizer(int n);
double diagonal_overlap_supremum(int n);

struct OptimizerOptions {
  int max_iterations = 20000;
  double gradient_tolerance = 1e-12;
  double initial_step = 0.1;  // scaled by 1/n
  double armijo = 1e-4;
};

struct ExtremalResult {
  double best_value = 0.0;
  OrthoPair best_pair;
  int restarts = 0;
  int best_restart = 0;
  int iterations = 0;  // iterations used by the winning restart
  double stationarity_residual = 0.0;
  std::vector<double> restart_values;
};

/// Riemannian gradient ascent from `restarts` random feasible starts; the
/// retraction is mean removal (diagonal mode) followed by Gram-Schmidt.
/// Ties are broken by the lower restart index.
ExtremalResult maximize_overlap(int n, PairMode mode, int restarts, std::uint64_t seed,
                                const OptimizerOptions& opts = {});

struct StationarityFit {
  // eta1(i) eta2(i)^2 = A eta1(i) + B eta2(i) + C
  // eta1(i)^2 eta2(i) = A2 eta2(i) + B eta1(i) + C2
  // with C = C2 = 0 in sphere mode.
  double a = 0.0, a2 = 0.0, b = 0.0, c = 0.0, c2 = 0.0;
  double residual = 0.0;
};

StationarityFit fit_multipliers(const std::vector<double>& eta1, const std::vector<double>& eta2,
                                PairMode mode);

/// Max-norm residual of the first-order system after least-squares
/// multipliers, maximized over the swapped and negated copies of the pair.
double stationarity_residual(const OrthoPair& pair, PairMode mode);

/// Independent search for n <= 6: all pairs with entries in {-1, 0, 1}
/// (projected onto the feasible set) plus `grid_density` random pairs.
double brute_force_overlap_max(int n, PairMode mode, int grid_density, std::uint64_t seed = 7);

/// Distinct nonzero magnitudes of eta1 (coordinates above `zero_tol`),
/// clustered within `tol`.
std::vector<double> magnitude_clusters(const std::vector<double>& v, double zero_tol, double tol);

}  // namespace snc
