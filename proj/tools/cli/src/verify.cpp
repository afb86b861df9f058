#include "snc_cli/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "snc/extremal.hpp"
#include "snc/gamma_core.hpp"
#include "snc/moments.hpp"
#include "snc/sncp_mc.hpp"

namespace snc::cli {
namespace {

using Clock = std::chrono::steady_clock;

// Slack of a check "value <= limit" in units of the limit.
double slack(double value, double limit) { return (limit - value) / limit; }

Json estimate_json(const McEstimate& e) {
  return Json{{"mean", e.mean}, {"std_error", e.std_error}, {"samples", e.samples}};
}

McConfig mc(const VerifyOptions& opts, std::uint64_t mandated, std::uint64_t seed) {
  McConfig cfg;
  cfg.samples = opts.samples.value_or(mandated);
  cfg.seed = seed;
  cfg.threads = opts.threads;
  return cfg;
}

struct Tracker {
  double margin = INFINITY;
  bool passed = true;
  void add(bool ok, double m) {
    passed = passed && ok;
    margin = std::min(margin, m);
  }
};

// --------------------------------------------------------------------------

CheckResult gurland_fixed_point(const VerifyOptions&) {
  CheckResult r;
  Tracker tr;
  const double at_half = gurland_F(0.5).value;
  const double err = std::abs(at_half - 3.0);
  tr.add(err <= 1e-12, slack(err, 1e-12));

  constexpr int kGrid = 10000;
  int violations = 0;
  int sign_changes = 0;
  double prev = gurland_F(1.0 / kGrid).value;
  double prev_d = prev - 3.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  for (int k = 2; k <= kGrid; ++k) {
    const double x = static_cast<double>(k) / kGrid;
    const double v = gurland_F(x).value;
    if (!(v > prev)) ++violations;
    const double d = v - 3.0;
    if ((d > 0) != (prev_d > 0) || d == 0.0) {
      ++sign_changes;
      bracket_lo = static_cast<double>(k - 1) / kGrid;
      bracket_hi = x;
    }
    prev = v;
    prev_d = d;
  }
  tr.add(violations == 0, violations == 0 ? 1.0 : -static_cast<double>(violations));
  tr.add(sign_changes == 1, sign_changes == 1 ? 1.0 : -1.0);

  double root = NAN;
  if (sign_changes >= 1) {
    // Widen the grid bracket so an exact grid-point root is still enclosed.
    auto [lo, hi] = boost::math::tools::bisect(
        [](double x) { return gurland_F_minus_3(x); }, bracket_lo - 1.0 / kGrid, bracket_hi,
        [](double a, double b) { return std::abs(b - a) < 1e-15; });
    root = 0.5 * (lo + hi);
  }
  const double root_err = std::abs(root - 0.5);
  tr.add(root_err <= 1e-10, std::isfinite(root_err) ? slack(root_err, 1e-10) : -1.0);

  r.details = Json{{"F_at_half", at_half},      {"F_at_half_error", err},
                   {"grid_points", kGrid},     {"monotonicity_violations", violations},
                   {"sign_changes", sign_changes}, {"root", root},
                   {"root_error", root_err}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "fraction of tolerance";
  return r;
}

CheckResult moment_oracles(const VerifyOptions&) {
  CheckResult r;
  Tracker tr;
  Json cells = Json::array();
  for (double p : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    for (double alpha : {0.5, 1.0, 2.0, 3.0, 4.0, 2.0 * p - 2.0}) {
      const double closed = moment_abs_g(p, alpha);
      const double oracle = quadrature_moment_abs_g(p, alpha);
      const double rel = std::abs(closed - oracle) / std::abs(oracle);
      tr.add(rel <= 1e-9, slack(rel, 1e-9));
      cells.push_back(Json{{"p", p}, {"alpha", alpha}, {"closed_form", closed}, {"quadrature", oracle},
                           {"relative_error", rel}});
    }
  }
  int zeroth_failures = 0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 5.0, 17.0}) {
    for (int m : {1, 2, 3, 10, 100, 1000}) {
      if (moment_S(p, m, 0.0) != 1.0) ++zeroth_failures;
    }
  }
  tr.add(zeroth_failures == 0, zeroth_failures == 0 ? 1.0 : -1.0);
  r.details = Json{{"cells", cells}, {"zeroth_moment_failures", zeroth_failures}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "fraction of tolerance";
  return r;
}

CheckResult ball_samplers(const VerifyOptions& opts) {
  CheckResult r;
  Tracker tr;
  const std::uint64_t base = derive_seed(opts.seed, 3);
  Json cells = Json::array();
  std::uint64_t cell = 0;
  for (double p : opts.p_grid) {
    for (int n : opts.n_grid) {
      const LpSpace space{p, n};
      Xoshiro256pp rng = SeededStream{base, cell}.engine();
      for (int k = 0; k < 3; ++k, ++cell) {
        const OrthoPair pair = OrthoPair::random(n, PairMode::sphere, rng);
        const double t = overlap_t(pair);
        const double exact = f_ball(space, t);
        for (BallBackend backend : {BallBackend::weighted, BallBackend::uniform}) {
          const McConfig cfg = mc(opts, 1'000'000, derive_seed(base, 2 * cell + (backend == BallBackend::uniform)));
          const McEstimate est = f_ball_mc(p, pair, cfg, backend);
          const double z = (est.mean - exact) / est.std_error;
          tr.add(std::abs(z) <= 4.0, 4.0 - std::abs(z));
          cells.push_back(Json{{"p", p},
                               {"n", n},
                               {"pair", k},
                               {"t", t},
                               {"backend", backend == BallBackend::weighted ? "weighted" : "uniform"},
                               {"exact", exact},
                               {"mc", estimate_json(est)},
                               {"z", z}});
        }
      }
    }
  }
  r.details = Json{{"cells", cells}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "standard errors below 4";
  return r;
}

CheckResult theorem_ordering(const VerifyOptions&) {
  CheckResult r;
  Tracker tr;
  Json cells = Json::array();
  const std::vector<int> ns{3, 10, 50, 200};
  for (double p : {2.0, 3.0, 4.0, 8.0}) {
    for (int n : ns) {
      const LpSpace s{p, n};
      const double fc = f_canonical(s), fr = f_rotated(s);
      // At p = 2 the two agree up to rounding; the gap check below covers it.
      const bool ordered = p == 2.0 ? std::abs(fr - fc) < 1e-12 : fr <= fc;
      const bool negative = fc < 0.0;
      tr.add(ordered && negative, ordered && negative ? 1.0 : -1.0);
      cells.push_back(Json{{"p", p}, {"n", n}, {"f_canonical", fc}, {"f_rotated", fr},
                           {"ok", ordered && negative}});
    }
  }
  for (double p : {1.0, 1.2, 1.5, 1.9}) {
    for (int n : ns) {
      const LpSpace s{p, n};
      const double fc = f_canonical(s), fr = f_rotated(s);
      tr.add(fc <= fr, fc <= fr ? 1.0 : -1.0);
      cells.push_back(Json{{"p", p}, {"n", n}, {"f_canonical", fc}, {"f_rotated", fr}, {"ok", fc <= fr}});
    }
  }
  double gap = 0.0;
  for (int n : ns) gap = std::max(gap, std::abs(f_rotated({2.0, n}) - f_canonical({2.0, n})));
  tr.add(gap < 1e-12, slack(gap, 1e-12));
  r.details = Json{{"cells", cells}, {"max_gap_at_p2", gap}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "fraction of tolerance (ordering cells count as 1 or -1)";
  return r;
}

CheckResult counterexample(const VerifyOptions& opts) {
  CheckResult r;
  Tracker tr;
  const ThresholdScan scan = n0_threshold(1.0, 100000);
  const bool found = scan.n0.has_value();
  tr.add(found, found ? 1.0 : -1.0);
  Json d{{"n0", found ? Json(*scan.n0) : Json(nullptr)},
         {"golden_n0", kGoldenN0AtP1},
         {"sign_changes", scan.sign_changes}};
  if (found) {
    tr.add(*scan.n0 == kGoldenN0AtP1, *scan.n0 == kGoldenN0AtP1 ? 1.0 : -1.0);
    const int n = *scan.n0 + 5;
    const McConfig cfg = mc(opts, 10'000'000, derive_seed(opts.seed, 5));
    const McEstimate est = f_ball_mc(1.0, OrthoPair::rotated(n), cfg, BallBackend::weighted);
    const double z = est.mean / est.std_error;
    tr.add(z >= 4.0, z - 4.0);
    d["n"] = n;
    d["f_rotated_exact"] = f_rotated({1.0, n});
    d["mc"] = estimate_json(est);
    d["z"] = z;
  }
  r.details = d;
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "standard errors above 4";
  return r;
}

CheckResult identities(const VerifyOptions& opts) {
  CheckResult r;
  Tracker tr;
  const std::uint64_t base = derive_seed(opts.seed, 6);
  Json cells = Json::array();
  for (int n : {4, 5, 10, 50}) {
    Xoshiro256pp rng = SeededStream{base, static_cast<std::uint64_t>(n)}.engine();
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      worst = std::max(worst, algebraic_identities_check(OrthoPair::random(n, PairMode::diagonal, rng)).max_residual());
    }
    tr.add(worst < 1e-10, slack(worst, 1e-10));
    cells.push_back(Json{{"n", n}, {"pairs", 100}, {"max_residual", worst}});
  }
  r.details = Json{{"cells", cells}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "fraction of tolerance";
  return r;
}

CheckResult extremal_bounds(const VerifyOptions& opts) {
  CheckResult r;
  Tracker tr;
  const std::uint64_t base = derive_seed(opts.seed, 7);
  Json cells = Json::array();
  for (PairMode mode : {PairMode::sphere, PairMode::diagonal}) {
    const double bound = overlap_bound(mode);
    for (int n : {4, 5, 10, 50, 200}) {
      const ExtremalResult res = maximize_overlap(n, mode, 32, base);
      const double dev = std::abs(res.best_value - bound);
      const double excess = res.best_value - bound;
      tr.add(dev <= 1e-6, slack(dev, 1e-6));
      tr.add(excess <= 1e-9, slack(std::max(excess, 0.0), 1e-9));
      tr.add(res.stationarity_residual < 1e-8, slack(res.stationarity_residual, 1e-8));
      Json cell{{"mode", to_string(mode)},
                {"n", n},
                {"best_value", res.best_value},
                {"bound", bound},
                {"excess_over_bound", excess},
                {"stationarity_residual", res.stationarity_residual},
                {"best_restart", res.best_restart}};
      if (mode == PairMode::diagonal) cell["supremum_one_half_minus_one_over_n"] = diagonal_overlap_supremum(n);
      cells.push_back(cell);
    }
  }
  Json brute = Json::array();
  for (PairMode mode : {PairMode::sphere, PairMode::diagonal}) {
    for (int n : {4, 5, 6}) {
      const double v = brute_force_overlap_max(n, mode, 2000, base);
      const double dev = std::abs(v - overlap_bound(mode));
      tr.add(dev <= 1e-4, slack(dev, 1e-4));
      brute.push_back(Json{{"mode", to_string(mode)}, {"n", n}, {"brute_force", v}, {"bound", overlap_bound(mode)}});
    }
  }
  r.details = Json{{"optimizer", cells}, {"brute_force", brute}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "fraction of tolerance";
  return r;
}

CheckResult diagonal_affinity(const VerifyOptions& opts) {
  CheckResult r;
  Tracker tr;
  Json cells = Json::array();
  const std::vector<double> ts{0.0, 1.0 / 16, 1.0 / 8, 5.0 / 32, 3.0 / 16, 1.0 / 4};
  for (auto [p, n] : {std::pair{1.0, 50}, std::pair{3.0, 50}}) {
    std::vector<OrthoPair> pairs;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      pairs.push_back(OrthoPair::diagonal_with_overlap(n, ts[k], static_cast<int>(4 * k)));
    }
    const McConfig cfg = mc(opts, 1'000'000, derive_seed(opts.seed, 800 + static_cast<std::uint64_t>(p)));
    const AffineFitReport rep = diag_affine_decomposition_check(p, pairs, cfg);
    tr.add(rep.chi2_ok(2.0), slack(rep.chi2_per_dof, 2.0));
    tr.add(rep.intercept_ok(4.0), 4.0 - std::abs(rep.intercept_z));
    tr.add(rep.quarter_ok(4.0), 4.0 - std::abs(rep.quarter_z));
    Json pts = Json::array();
    for (const auto& pt : rep.points) pts.push_back(Json{{"t", pt.t}, {"f", estimate_json(pt.f)}});
    cells.push_back(Json{{"p", p},
                         {"n", n},
                         {"points", pts},
                         {"intercept", rep.intercept},
                         {"intercept_se", rep.intercept_se},
                         {"slope", rep.slope},
                         {"slope_se", rep.slope_se},
                         {"slope_sign", to_string(rep.slope_sign)},
                         {"quarter_value", rep.quarter_value},
                         {"quarter_se", rep.quarter_se},
                         {"chi2_per_dof", rep.chi2_per_dof},
                         {"xi_bar", estimate_json(rep.xi_bar)},
                         {"xi", estimate_json(rep.xi)},
                         {"intercept_z", rep.intercept_z},
                         {"quarter_z", rep.quarter_z}});
  }
  r.details = Json{{"cells", cells}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "mixed: chi2 fraction and standard errors";
  return r;
}

CheckResult extremal_signs(const VerifyOptions& opts) {
  CheckResult r;
  Tracker tr;
  Json cells = Json::array();
  std::vector<std::pair<ExtremalPair, double>> grid{
      {ExtremalPair::xi_bar, 1.0}, {ExtremalPair::xi_bar, 1.5}, {ExtremalPair::xi_bar, 3.0},
      {ExtremalPair::xi_bar, 8.0}, {ExtremalPair::xi, 1.0},     {ExtremalPair::xi, 1.5},
      {ExtremalPair::xi, 2.0}};
  std::uint64_t k = 0;
  for (auto [which, p] : grid) {
    const McConfig cfg = mc(opts, 10'000'000, derive_seed(derive_seed(opts.seed, 9), k++));
    const McEstimate est = f_diag_extremal_values(p, 100, which, cfg);
    const double z = -est.mean / est.std_error;
    const bool negative = z >= 3.0;
    tr.add(negative, z - 3.0);
    cells.push_back(Json{{"which", to_string(which)},
                         {"p", p},
                         {"n", 100},
                         {"mc", estimate_json(est)},
                         {"sigmas_below_zero", z},
                         {"verdict", to_string(sign_verdict(est, 3.0))},
                         {"ok", negative}});
  }
  r.details = Json{{"cells", cells}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "standard errors beyond 3";
  return r;
}

double two_variable_h(std::span<const double> g) { return g[0] * g[0] * g[1] * g[1] - g[0] * g[1]; }

CheckResult splitting(const VerifyOptions& opts) {
  CheckResult r;
  Tracker tr;
  Json cells = Json::array();
  constexpr int n = 50;
  std::uint64_t k = 0;
  const std::uint64_t base = derive_seed(opts.seed, 10);
  for (int kk : {2, 4}) {
    const TestIntegrand h = kk == 4 ? TestIntegrand(quartic_h) : TestIntegrand(two_variable_h);
    for (double p : {1.0, 2.0, 3.0}) {
      const SplittingReport rep = splitting_identity_check(kk, p, n - kk, h, mc(opts, 1'000'000, derive_seed(base, k++)));
      const double z = rep.difference.mean / rep.difference.std_error;
      tr.add(rep.identity_ok(4.0), 4.0 - std::abs(z));
      const double bz = (std::abs(rep.second_term.mean) - rep.bound) / rep.second_term.std_error;
      tr.add(rep.bound_ok(4.0), std::min(4.0, 4.0 - bz));
      cells.push_back(Json{{"kind", "splitting"},
                           {"k", kk},
                           {"p", p},
                           {"n", n},
                           {"lhs", estimate_json(rep.lhs)},
                           {"rhs", estimate_json(rep.rhs)},
                           {"difference", estimate_json(rep.difference)},
                           {"z", z},
                           {"second_term", estimate_json(rep.second_term)},
                           {"bound", rep.bound}});
    }
  }
  for (double p : {1.0, 2.0, 3.0}) {
    for (ExtremalPair which : {ExtremalPair::xi_bar, ExtremalPair::xi}) {
      const FourTermReport rep = four_term_expansion_check(p, n, which, mc(opts, 1'000'000, derive_seed(base, k++)));
      const double z = rep.difference.mean / rep.difference.std_error;
      tr.add(rep.identity_ok(4.0), 4.0 - std::abs(z));
      cells.push_back(Json{{"kind", "four_term"},
                           {"which", to_string(which)},
                           {"p", p},
                           {"n", n},
                           {"lhs", estimate_json(rep.lhs)},
                           {"rhs", estimate_json(rep.rhs)},
                           {"difference", estimate_json(rep.difference)},
                           {"z", z},
                           {"terms", rep.terms}});
    }
  }
  r.details = Json{{"cells", cells}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "standard errors below 4";
  return r;
}

CheckResult psi_scaling(const VerifyOptions& opts) {
  CheckResult r;
  Tracker tr;
  constexpr int n = 64;
  const PsiSurvey survey = psi_scaling_survey(n, {1, 2, 4, 8, 16, 32}, mc(opts, 1'000'000, derive_seed(opts.seed, 11)));
  const double ratio = survey.ratio();
  tr.add(ratio <= 4.0, slack(ratio, 4.0));
  const McEstimate& p1 = survey.rows.front().scaled_mean;
  const double oracle = binomial_walk_psi_mean(n);
  const double z = (p1.mean - oracle) / p1.std_error;
  tr.add(std::abs(z) <= 4.0, (4.0 - std::abs(z)) / 4.0);
  Json rows = Json::array();
  for (const auto& row : survey.rows) rows.push_back(Json{{"p", row.p}, {"scaled_mean", estimate_json(row.scaled_mean)}});
  r.details = Json{{"n", n},
                   {"rows", rows},
                   {"min", survey.min_value},
                   {"max", survey.max_value},
                   {"ratio", ratio},
                   {"binomial_oracle_p1", oracle},
                   {"z_p1", z}};
  r.passed = tr.passed;
  r.margin = tr.margin;
  r.margin_unit = "fraction of tolerance";
  return r;
}

struct CriterionDef {
  const char* name;
  double runtime_limit_s;
  std::function<CheckResult(const VerifyOptions&)> run;
};

const CriterionDef& definition(int criterion) {
  static const std::vector<CriterionDef> defs{
      {"gurland fixed point and monotonicity", 1.0, gurland_fixed_point},
      {"moment closed forms vs quadrature", 10.0, moment_oracles},
      {"ball closed form vs both samplers", 600.0, ball_samplers},
      {"ordering of f on the ball", 1.0, theorem_ordering},
      {"counterexample at p = 1", 300.0, counterexample},
      {"diagonal sum identities", 5.0, identities},
      {"extremal overlap bounds", 120.0, extremal_bounds},
      {"affine decomposition on the diagonal", 900.0, diagonal_affinity},
      {"extremal pair signs on the diagonal", 1800.0, extremal_signs},
      {"splitting identity and four-term expansion", 300.0, splitting},
      {"psi scaling", 300.0, psi_scaling},
  };
  if (criterion < 1 || criterion > static_cast<int>(defs.size())) {
    throw std::out_of_range("no verification criterion " + std::to_string(criterion));
  }
  return defs[static_cast<std::size_t>(criterion - 1)];
}

}  // namespace

Suite parse_suite(const std::string& text) {
  if (text == "gamma") return Suite::gamma;
  if (text == "ball") return Suite::ball;
  if (text == "diagonal") return Suite::diagonal;
  if (text == "extremal") return Suite::extremal;
  if (text == "all") return Suite::all;
  throw std::invalid_argument("unknown suite '" + text + "'");
}

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::gamma: return "gamma";
    case Suite::ball: return "ball";
    case Suite::diagonal: return "diagonal";
    case Suite::extremal: return "extremal";
    default: return "all";
  }
}

std::vector<int> suite_criteria(Suite suite) {
  switch (suite) {
    case Suite::gamma: return {1, 2};
    case Suite::ball: return {3, 4, 5};
    case Suite::extremal: return {7};
    case Suite::diagonal: return {6, 8, 9, 10, 11};
    default: return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  }
}

CheckResult run_criterion(int criterion, const VerifyOptions& opts) {
  const CriterionDef& def = definition(criterion);
  const auto start = Clock::now();
  CheckResult r = def.run(opts);
  r.runtime_s = std::chrono::duration<double>(Clock::now() - start).count();
  r.criterion = criterion;
  r.name = def.name;
  r.runtime_limit_s = def.runtime_limit_s;
  return r;
}

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  for (int c : suite_criteria(opts.suite)) out.push_back(run_criterion(c, opts));
  return out;
}

Json verify_report(const std::vector<CheckResult>& results, const VerifyOptions& opts, bool with_timing) {
  Json params{{"suite", to_string(opts.suite)}, {"seed", opts.seed}};
  params["samples_override"] = opts.samples ? Json(*opts.samples) : Json(nullptr);
  params["p_grid"] = opts.p_grid;
  params["n_grid"] = opts.n_grid;
  Json checks = Json::array();
  bool all = true;
  for (const auto& r : results) {
    Json c{{"criterion", r.criterion}, {"name", r.name}, {"passed", r.passed}, {"margin", r.margin},
           {"margin_unit", r.margin_unit}};
    if (with_timing) {
      c["runtime_s"] = r.runtime_s;
      c["runtime_limit_s"] = r.runtime_limit_s;
    }
    c["details"] = r.details;
    checks.push_back(std::move(c));
    all = all && r.passed;
  }
  return Json{{"command", "verify"}, {"params", params}, {"passed", all}, {"checks", checks}};
}

double quadrature_moment_abs_g(double p, double alpha) {
  boost::math::quadrature::tanh_sinh<double> inner;
  boost::math::quadrature::exp_sinh<double> outer;
  auto integral = [&](double a) {
    auto f = [p, a](double t) {
      const double tail = std::exp(-std::pow(t, p));
      if (tail == 0.0) return 0.0;
      return a == 0.0 ? tail : std::pow(t, a) * tail;
    };
    return inner.integrate(f, 0.0, 1.0) + outer.integrate(f, 1.0, std::numeric_limits<double>::infinity());
  };
  return integral(alpha) / integral(0.0);
}

double binomial_walk_psi_mean(int n) {
  // P(k pluses) = C(n, k) 2^-n, built by the ratio recurrence.
  long double prob = std::pow(0.5L, n);
  long double sum = 0.0L;
  for (int k = 0; k <= n; ++k) {
    sum += prob * std::abs(2 * k - n);
    prob = prob * (n - k) / (k + 1);
  }
  return static_cast<double>(sum / std::sqrt(static_cast<long double>(n)));
}

}  // namespace snc::cli
