#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snc_cli/output.hpp"

namespace snc::cli {

enum class Suite { gamma, ball, diagonal, extremal, all };

Suite parse_suite(const std::string& text);
std::string to_string(Suite suite);

// Criteria run by each suite: gamma {1, 2}, ball {3, 4, 5}, extremal {7},
// diagonal {6, 8, 9, 10, 11}, all = 1..11.
std::vector<int> suite_criteria(Suite suite);

struct VerifyOptions {
  Suite suite = Suite::all;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  // Replaces every Monte Carlo sample count when set (quick runs only; the
  // mandated counts apply otherwise).
  std::optional<std::uint64_t> samples;
  // Grid of the ball sampler comparison (criterion 3).
  std::vector<double> p_grid{1.0, 1.5, 2.0, 3.0, 4.0};
  std::vector<int> n_grid{3, 10, 50};
};

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  // Smallest slack over all cells, in the unit named by `margin_unit`;
  // negative when the check fails.
  double margin = 0.0;
  std::string margin_unit;
  double runtime_limit_s = 0.0;
  double runtime_s = 0.0;
  Json details = Json::object();
};

CheckResult run_criterion(int criterion, const VerifyOptions& opts);
std::vector<CheckResult> run_verify(const VerifyOptions& opts);

// Report object; wall-clock fields are left out when `with_timing` is false.
Json verify_report(const std::vector<CheckResult>& results, const VerifyOptions& opts, bool with_timing);

// Oracles used by the checks.
double quadrature_moment_abs_g(double p, double alpha);  // E|g|^alpha by tanh-sinh / exp-sinh
double binomial_walk_psi_mean(int n);                     // E psi at p = 1, exact enumeration

// Golden value of the first n with f_rotated(1, n) > 0, frozen from the scan.
inline constexpr int kGoldenN0AtP1 = 3;

}  // namespace snc::cli
