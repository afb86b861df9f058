#pragma once

#include <string>
#include <vector>

#include "snc/rng.hpp"

namespace snc {

enum class PairMode { sphere, diagonal };

std::string to_string(PairMode mode);
PairMode parse_pair_mode(const std::string& text);

// Orthonormal pair (eta1, eta2) in R^n. Diagonal mode additionally requires
// both vectors to be orthogonal to (1, ..., 1).
class OrthoPair {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Validates and throws ValidationError naming the violated invariant.
  OrthoPair(std::vector<double> eta1, std::vector<double> eta2, PairMode mode);

  int n() const noexcept { return static_cast<int>(eta1_.size()); }
  const std::vector<double>& eta1() const noexcept { return eta1_; }
  const std::vector<double>& eta2() const noexcept { return eta2_; }
  PairMode mode() const noexcept { return mode_; }

  /// Empty string when valid, otherwise a description of the first violation.
  static std::string check(const std::vector<double>& eta1, const std::vector<double>& eta2,
                           PairMode mode);

  // Named pairs. Indices are zero-based coordinates.
  static OrthoPair canonical(int n, int i = 0, int j = 1);        // (e_i, e_j)
  static OrthoPair rotated(int n, int i = 0, int j = 1);          // (e_i +- e_j) / sqrt 2
  static OrthoPair diagonal_xi_bar(int n, int first = 0);         // (e1-e2)/sqrt2, (e3-e4)/sqrt2
  static OrthoPair diagonal_xi(int n, int first = 0);             // (e1-e2+e3-e4)/2, (e1-e2-e3+e4)/2
  // Rotation of the xi_bar pair inside its plane; overlap t = sin^2(2 phi)/4,
  // so every t in [0, 1/4] is reachable.
  static OrthoPair diagonal_with_overlap(int n, double t, int first = 0);
  // Rotation of (e_i, e_j) in their plane; overlap sin^2(2 phi)/2, t in [0, 1/2].
  static OrthoPair sphere_with_overlap(int n, double t, int i = 0, int j = 1);

  static OrthoPair random(int n, PairMode mode, Xoshiro256pp& rng);

  // Same pair with coordinates permuted: result(i) = this(perm[i]).
  OrthoPair permuted(const std::vector<int>& perm) const;

 private:
  std::vector<double> eta1_;
  std::vector<double> eta2_;
  PairMode mode_;
};

/// sum_i eta1(i)^2 eta2(i)^2.
double overlap_t(const OrthoPair& pair);
double overlap_t(const std::vector<double>& a, const std::vector<double>& b);

// Projects (a, b) onto the feasible set: remove means (diagonal mode), then
// Gram-Schmidt. Returns false if a vector collapses.
bool orthonormalize(std::vector<double>& a, std::vector<double>& b, PairMode mode);

}  // namespace snc
