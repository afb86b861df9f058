#include "snc/sncp_mc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snc/errors.hpp"
#include "snc/moments.hpp"
#include "snc/sampler.hpp"

namespace snc {
namespace {

void require_p(double p) {
  if (!std::isfinite(p) || p < 1.0) throw DomainError("p must be finite and >= 1");
}

void require_samples(const McConfig& cfg, std::uint64_t minimum) {
  if (cfg.samples < minimum) {
    throw PreconditionError("Monte Carlo run needs at least " + std::to_string(minimum) +
                            " samples, got " + std::to_string(cfg.samples));
  }
}

// Draws one row of g and keeps what every estimator needs.
class RowDraw {
 public:
  RowDraw(double p, std::size_t m) : gen_(p), inv_p_(1.0 / p), g(m), signed_pm1(m) {}

  void fill(Xoshiro256pp& rng) {
    s_pow_p = 0.0;
    signed_sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      GeneralizedGaussian::Draw d = gen_.draw(rng);
      while (d.value == 0.0) d = gen_.draw(rng);
      g[i] = d.value;
      signed_pm1[i] = std::copysign(d.abs_pow_pm1, d.value);
      s_pow_p += d.abs_pow_p;
      signed_sum += signed_pm1[i];
    }
  }

  double s() const { return std::pow(s_pow_p, inv_p_); }
  double p() const { return gen_.p(); }

 private:
  GeneralizedGaussian gen_;
  double inv_p_;

 public:
  std::vector<double> g;
  std::vector<double> signed_pm1;
  double s_pow_p = 0.0;
  double signed_sum = 0.0;
};

// Coordinates where either vector is nonzero; named pairs touch 2-4 of them.
struct SparsePair {
  std::vector<std::size_t> index;
  std::vector<double> a;
  std::vector<double> b;

  explicit SparsePair(const OrthoPair& pair) {
    for (std::size_t i = 0; i < pair.eta1().size(); ++i) {
      if (pair.eta1()[i] != 0.0 || pair.eta2()[i] != 0.0) {
        index.push_back(i);
        a.push_back(pair.eta1()[i]);
        b.push_back(pair.eta2()[i]);
      }
    }
  }

  // (<x, eta1>, <x, eta2>)
  std::pair<double, double> project(const std::vector<double>& x) const {
    double u = 0.0, v = 0.0;
    for (std::size_t k = 0; k < index.size(); ++k) {
      const double xi = x[index[k]];
      u += xi * a[k];
      v += xi * b[k];
    }
    return {u, v};
  }
};

// f from the means of (w, u^2 w, v^2 w, u^2 v^2 w).
double f_from_means(std::span<const double> m) {
  return m[3] / m[0] - (m[1] / m[0]) * (m[2] / m[0]);
}

McEstimate finish(const BatchSums& sums, const McConfig& cfg, const MeanFunctional& fn,
                  std::string method) {
  const BatchMeansResult r = batch_means(sums, cfg.samples, fn);
  return {r.point, r.std_error, cfg.samples, cfg.seed, std::move(method)};
}

double z_score(double a, double sa, double b, double sb) {
  const double se = joint_std_error(sa, sb);
  if (se == 0.0) return a == b ? 0.0 : std::copysign(INFINITY, a - b);
  return (a - b) / se;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(SignVerdict v) {
  switch (v) {
    case SignVerdict::negative: return "negative";
    case SignVerdict::positive: return "positive";
    default: return "indeterminate";
  }
}

std::string to_string(SncpMethod m) {
  switch (m) {
    case SncpMethod::exact_decomposition: return "exact-decomposition";
    case SncpMethod::mc_weighted: return "mc-weighted";
    default: return "mc-uniform";
  }
}

std::string to_string(ExtremalPair which) { return which == ExtremalPair::xi ? "xi" : "xi_bar"; }

SignVerdict sign_verdict(const McEstimate& est, double sigmas) {
  if (std::abs(est.mean) < sigmas * est.std_error || est.mean == 0.0) return SignVerdict::indeterminate;
  return est.mean < 0.0 ? SignVerdict::negative : SignVerdict::positive;
}

SignVerdict sign_verdict(double exact_value) {
  if (exact_value < 0.0) return SignVerdict::negative;
  if (exact_value > 0.0) return SignVerdict::positive;
  return SignVerdict::indeterminate;
}

SncpReport make_report(const OrthoPair& pair, double exact_value) {
  return {pair, exact_value, sign_verdict(exact_value), SncpMethod::exact_decomposition};
}

SncpReport make_report(const OrthoPair& pair, const McEstimate& est, SncpMethod method) {
  return {pair, est, sign_verdict(est), method};
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL);
  splitmix64(state);
  return splitmix64(state);
}

// ---------------------------------------------------------------------------

double IdentityResiduals::max_residual() const {
  double worst = 0.0;
  for (double r : residual) worst = std::max(worst, std::abs(r));
  return worst;
}

IdentityResiduals algebraic_identities_check(const OrthoPair& pair) {
  if (pair.mode() != PairMode::diagonal) {
    throw PreconditionError("algebraic_identities_check needs a diagonal-mode pair");
  }
  const auto& a = pair.eta1();
  const auto& b = pair.eta2();
  const int n = pair.n();
  const double t = overlap_t(pair);

  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0, s5 = 0.0, s6 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      s1 += a[i] * a[j] * b[j] * b[j];
      s2 += a[i] * a[i] * b[j] * b[j];
      s3 += a[i] * b[i] * a[j] * b[j];
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        s4 += a[i] * a[i] * b[j] * b[k];
        s5 += a[i] * b[i] * a[j] * b[k];
        const double aij = a[i] * a[j] * b[k];
        double inner = 0.0;
        for (int l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          inner += b[l];
        }
        s6 += aij * inner;
      }
    }
  }

  IdentityResiduals r;
  r.overlap = t;
  r.lhs = {s1, s2, s3, s4, s5, s6};
  r.rhs = {-t, 1.0 - t, -t, -1.0 + 2.0 * t, 2.0 * t, 1.0 - 6.0 * t};
  for (int q = 0; q < 6; ++q) r.residual[q] = r.lhs[q] - r.rhs[q];
  return r;
}

// ---------------------------------------------------------------------------

McEstimate f_ball_mc(double p, const OrthoPair& pair, const McConfig& cfg, BallBackend backend) {
  require_p(p);
  require_samples(cfg, 10'000);
  const int n = pair.n();
  const SparsePair sp(pair);

  if (backend == BallBackend::weighted) {
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    auto make_kernel = [&] {
      return [row = RowDraw(p, m), &sp, p, m](Xoshiro256pp& rng, double* out) mutable {
        row.fill(rng);
        const double s = row.s();
        const double w = std::abs(row.signed_pm1[m - 1]) / std::pow(s, p - 1.0);
        auto [u, v] = sp.project(row.g);
        const double u2 = u * u / (s * s);
        const double v2 = v * v / (s * s);
        out[0] = w;
        out[1] = u2 * w;
        out[2] = v2 * w;
        out[3] = u2 * v2 * w;
      };
    };
    return finish(run_batched(cfg, 4, make_kernel), cfg, f_from_means, "mc-weighted");
  }

  const std::size_t m = static_cast<std::size_t>(n);
  auto make_kernel = [&] {
    return [row = RowDraw(p, m), &sp, n](Xoshiro256pp& rng, double* out) mutable {
      row.fill(rng);
      const double radius = std::pow(rng.uniform_open(), 1.0 / n);
      const double scale = radius / row.s();
      auto [u, v] = sp.project(row.g);
      const double u2 = u * u * scale * scale;
      const double v2 = v * v * scale * scale;
      out[0] = 1.0;
      out[1] = u2;
      out[2] = v2;
      out[3] = u2 * v2;
    };
  };
  return finish(run_batched(cfg, 4, make_kernel), cfg, f_from_means, "mc-uniform");
}

McEstimate f_diag_mc(double p, const OrthoPair& pair, const McConfig& cfg) {
  require_p(p);
  require_samples(cfg, 10'000);
  if (pair.mode() != PairMode::diagonal) {
    throw PreconditionError("f_diag_mc needs a diagonal-mode pair");
  }
  const int n = pair.n();
  if (n < kMinDiagonalDimension) throw DomainError("f_diag_mc: n must be >= 4");
  const SparsePair sp(pair);
  const std::size_t m = static_cast<std::size_t>(n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));

  // eta is orthogonal to theta0, so <P(G/S), eta> = <G, eta> / S.
  auto make_kernel = [&] {
    return [row = RowDraw(p, m), &sp, p, inv_sqrt_n](Xoshiro256pp& rng, double* out) mutable {
      row.fill(rng);
      const double s = row.s();
      const double w = std::abs(row.signed_sum) * inv_sqrt_n / std::pow(s, p - 1.0);
      auto [u, v] = sp.project(row.g);
      const double u2 = u * u / (s * s);
      const double v2 = v * v / (s * s);
      out[0] = w;
      out[1] = u2 * w;
      out[2] = v2 * w;
      out[3] = u2 * v2 * w;
    };
  };
  return finish(run_batched(cfg, 4, make_kernel), cfg, f_from_means, "mc-weighted");
}

// ---------------------------------------------------------------------------

double extremal_h(ExtremalPair which, double c, std::span<const double, 6> x) {
  const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3], x5 = x[4], x6 = x[5];
  const double cross = x1 * x1 * x5 * x5 - 2.0 * x1 * x2 * x5 * x5 + x1 * x2 * x5 * x6;
  double main;
  if (which == ExtremalPair::xi_bar) {
    const double d12 = x1 - x2;
    const double d34 = x3 - x4;
    main = 0.25 * d12 * d12 * d34 * d34;
  } else {
    const double s = x1 - x2 + x3 - x4;
    const double r = x1 - x2 - x3 + x4;
    main = s * s * r * r / 16.0;
  }
  return main - c * cross;
}

McEstimate f_diag_extremal_values(double p, int n, ExtremalPair which, const McConfig& cfg) {
  require_p(p);
  require_samples(cfg, 10'000);
  const LpSpace space{p, n};
  space.validate(kMinDiagonalDimension);
  const double c = ratio_coefficient_diag(space);
  const double moment_ratio = std::exp(log_moment_S(p, n, p - 1.0) - log_moment_S(p, n, p + 3.0));
  const std::size_t m = static_cast<std::size_t>(n);
  const double inv_n = 1.0 / n;

  auto make_kernel = [&] {
    return [g = RowDraw(p, m), gbar = RowDraw(p, m), which, c, inv_n](Xoshiro256pp& rng,
                                                                       double* out) mutable {
      g.fill(rng);
      gbar.fill(rng);
      const double weight = std::abs(g.signed_sum) * std::abs(gbar.signed_sum) * inv_n;
      const std::array<double, 6> x{g.g[0], g.g[1], g.g[2], g.g[3], gbar.g[0], gbar.g[1]};
      out[0] = weight;
      out[1] = extremal_h(which, c, x) * weight;
    };
  };
  auto fn = [moment_ratio](std::span<const double> mm) { return moment_ratio * mm[1] / mm[0]; };
  return finish(run_batched(cfg, 2, make_kernel), cfg, fn, "mc-weighted");
}

double extremal_h_mean(double p, int n, ExtremalPair which) {
  const LpSpace space{p, n};
  space.validate(kMinDiagonalDimension);
  const double c = ratio_coefficient_diag(space);
  const double m2 = moment_abs_g(p, 2.0);
  const double m4 = moment_abs_g(p, 4.0);
  // Cross term: E x1^2 x5^2 = m2^2, the other two monomials vanish.
  if (which == ExtremalPair::xi_bar) {
    // E (x1-x2)^2 (x3-x4)^2 / 4 = (2 m2)^2 / 4.
    return m2 * m2 * (1.0 - c);
  }
  // E (a+b)^2 (a-b)^2 / 16 with a = x1-x2, b = x3-x4 equals (m4 + m2^2) / 4.
  return 0.25 * (m4 + m2 * m2) - c * m2 * m2;
}

McEstimate extremal_h_mean_mc(double p, int n, ExtremalPair which, const McConfig& cfg) {
  require_p(p);
  require_samples(cfg, 10'000);
  const double c = ratio_coefficient_diag({p, n});
  auto make_kernel = [&] {
    return [gen = GeneralizedGaussian(p), which, c](Xoshiro256pp& rng, double* out) {
      std::array<double, 6> x;
      for (double& v : x) v = gen(rng);
      out[0] = extremal_h(which, c, x);
    };
  };
  auto fn = [](std::span<const double> mm) { return mm[0]; };
  return finish(run_batched(cfg, 1, make_kernel), cfg, fn, "mc-unweighted");
}

// ---------------------------------------------------------------------------

bool AffineFitReport::intercept_ok(double sigmas) const { return std::abs(intercept_z) <= sigmas; }
bool AffineFitReport::quarter_ok(double sigmas) const { return std::abs(quarter_z) <= sigmas; }

AffineFitReport diag_affine_decomposition_check(double p, const std::vector<OrthoPair>& pairs,
                                                const McConfig& cfg) {
  require_p(p);
  if (pairs.empty()) throw PreconditionError("affine check needs pairs");
  const int n = pairs.front().n();
  std::vector<double> ts;
  for (const auto& pr : pairs) {
    if (pr.mode() != PairMode::diagonal || pr.n() != n) {
      throw PreconditionError("affine check: all pairs must be diagonal and share n");
    }
    const double t = overlap_t(pr);
    if (t < -1e-12 || t > 0.25 + 1e-12) throw PreconditionError("affine check: overlap outside [0, 1/4]");
    ts.push_back(t);
  }
  std::vector<double> distinct = ts;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                 distinct.end());
  if (distinct.size() < 3) {
    throw PreconditionError("affine check: pairs must span at least 3 distinct overlap values");
  }

  AffineFitReport rep;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, sy = 0.0, sty = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    McConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, k);
    const McEstimate est = f_diag_mc(p, pairs[k], sub);
    rep.points.push_back({ts[k], est});
    const double se = std::max(est.std_error, 1e-300);
    const double w = 1.0 / (se * se);
    s0 += w;
    s1 += w * ts[k];
    s2 += w * ts[k] * ts[k];
    sy += w * est.mean;
    sty += w * ts[k] * est.mean;
  }
  const double det = s0 * s2 - s1 * s1;
  rep.intercept = (s2 * sy - s1 * sty) / det;
  rep.slope = (s0 * sty - s1 * sy) / det;
  const double var_a = s2 / det;
  const double var_b = s0 / det;
  const double cov_ab = -s1 / det;
  rep.intercept_se = std::sqrt(var_a);
  rep.slope_se = std::sqrt(var_b);
  rep.quarter_value = rep.intercept + 0.25 * rep.slope;
  rep.quarter_se = std::sqrt(std::max(0.0, var_a + var_b / 16.0 + 0.5 * cov_ab));

  double chi2 = 0.0;
  for (const auto& pt : rep.points) {
    const double r = (pt.f.mean - rep.intercept - rep.slope * pt.t) / pt.f.std_error;
    chi2 += r * r;
  }
  const double dof = static_cast<double>(rep.points.size()) - 2.0;
  rep.chi2_per_dof = dof > 0 ? chi2 / dof : 0.0;

  McConfig ded = cfg;
  ded.seed = derive_seed(cfg.seed, 1000);
  rep.xi_bar = f_diag_extremal_values(p, n, ExtremalPair::xi_bar, ded);
  ded.seed = derive_seed(cfg.seed, 1001);
  rep.xi = f_diag_extremal_values(p, n, ExtremalPair::xi, ded);
  rep.intercept_z = z_score(rep.intercept, rep.intercept_se, rep.xi_bar.mean, rep.xi_bar.std_error);
  rep.quarter_z = z_score(rep.quarter_value, rep.quarter_se, rep.xi.mean, rep.xi.std_error);
  rep.slope_sign = sign_verdict(McEstimate{rep.slope, rep.slope_se, cfg.samples, cfg.seed, "wls"});
  return rep;
}

MarginalDiagReport mean_square_marginal_diag(double p, int n, const McConfig& cfg) {
  require_p(p);
  require_samples(cfg, 10'000);
  if (n < 2) throw DomainError("mean_square_marginal_diag: n must be >= 2");
  const std::size_t m = static_cast<std::size_t>(n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double moment_ratio = std::exp(log_moment_S(p, n, p - 1.0) - log_moment_S(p, n, p + 1.0));

  MarginalDiagReport rep;
  {
    McConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, 0);
    auto make_kernel = [&] {
      return [row = RowDraw(p, m), inv_sqrt_n](Xoshiro256pp& rng, double* out) mutable {
        row.fill(rng);
        const double psi = std::abs(row.signed_sum) * inv_sqrt_n;
        out[0] = psi;
        out[1] = row.g[0] * (row.g[0] - row.g[1]) * psi;
      };
    };
    auto fn = [moment_ratio](std::span<const double> mm) { return moment_ratio * mm[1] / mm[0]; };
    rep.formula_route = finish(run_batched(sub, 2, make_kernel), sub, fn, "mc-weighted");
  }

  auto direct = [&](std::uint64_t tag) {
    McConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, tag);
    Xoshiro256pp dir_rng = SeededStream{sub.seed, ~std::uint64_t{0}}.engine();
    std::vector<double> eta(m), dummy(m);
    for (;;) {
      for (double& x : eta) x = dir_rng.normal();
      for (double& x : dummy) x = dir_rng.normal();
      if (orthonormalize(eta, dummy, PairMode::diagonal)) break;
    }
    auto make_kernel = [&] {
      return [row = RowDraw(p, m), &eta, p, inv_sqrt_n](Xoshiro256pp& rng, double* out) mutable {
        row.fill(rng);
        const double s = row.s();
        const double w = std::abs(row.signed_sum) * inv_sqrt_n / std::pow(s, p - 1.0);
        double u = 0.0;
        for (std::size_t i = 0; i < eta.size(); ++i) u += row.g[i] * eta[i];
        out[0] = w;
        out[1] = u * u / (s * s) * w;
      };
    };
    auto fn = [](std::span<const double> mm) { return mm[1] / mm[0]; };
    return finish(run_batched(sub, 2, make_kernel), sub, fn, "mc-weighted");
  };
  rep.direct_route = direct(1);
  rep.second_direction = direct(2);
  rep.route_z = z_score(rep.formula_route.mean, rep.formula_route.std_error, rep.direct_route.mean,
                        rep.direct_route.std_error);
  rep.direction_z = z_score(rep.direct_route.mean, rep.direct_route.std_error,
                            rep.second_direction.mean, rep.second_direction.std_error);
  return rep;
}

// ---------------------------------------------------------------------------

double quartic_h(std::span<const double> g) {
  const double g1 = g[0], g2 = g[1], g3 = g[2], g4 = g[3];
  const double g1s = g1 * g1;
  return g1s * g1s - 4.0 * g1s * g1 * g2 - 3.0 * g1s * g2 * g2 + 12.0 * g1s * g2 * g3 -
         6.0 * g1 * g2 * g3 * g4;
}

bool SplittingReport::identity_ok(double sigmas) const {
  return std::abs(difference.mean) <= sigmas * difference.std_error;
}

bool SplittingReport::bound_ok(double sigmas) const {
  return std::abs(second_term.mean) <= bound + sigmas * second_term.std_error;
}

SplittingReport splitting_identity_check(int k, double p, int tail_length, const TestIntegrand& h,
                                         const McConfig& cfg) {
  require_p(p);
  require_samples(cfg, 10'000);
  if (k < 1) throw DomainError("splitting_identity_check: k must be >= 1");
  if (tail_length < 0) throw DomainError("splitting_identity_check: tail length must be >= 0");
  const std::size_t m = static_cast<std::size_t>(k + tail_length);

  auto make_kernel = [&] {
    return [row = RowDraw(p, m), &h, k](Xoshiro256pp& rng, double* out) mutable {
      row.fill(rng);
      double y = 0.0;
      for (int i = 0; i < k; ++i) y += row.signed_pm1[i];
      const double z = row.signed_sum - y;
      const double hv = h(std::span<const double>(row.g.data(), static_cast<std::size_t>(k)));
      const double ay = std::abs(y), az = std::abs(z);
      const double split = ay >= az ? hv * (ay - az) : 0.0;
      out[0] = hv * std::abs(y + z);
      out[1] = hv;
      out[2] = az;
      out[3] = split;
      out[4] = hv * hv;
      out[5] = y * y;
    };
  };
  const BatchSums sums = run_batched(cfg, 6, make_kernel);

  SplittingReport rep;
  rep.lhs = finish(sums, cfg, [](std::span<const double> mm) { return mm[0]; }, "mc");
  rep.rhs = finish(sums, cfg, [](std::span<const double> mm) { return mm[1] * mm[2] + mm[3]; }, "mc");
  rep.difference =
      finish(sums, cfg, [](std::span<const double> mm) { return mm[0] - mm[1] * mm[2] - mm[3]; }, "mc");
  rep.second_term = finish(sums, cfg, [](std::span<const double> mm) { return mm[3]; }, "mc");
  const auto t = sums.total();
  const double N = static_cast<double>(cfg.samples);
  rep.bound = std::sqrt(t[4] / N) * std::sqrt(t[5] / N);
  return rep;
}

bool FourTermReport::identity_ok(double sigmas) const {
  return std::abs(difference.mean) <= sigmas * difference.std_error;
}

FourTermReport four_term_expansion_check(double p, int n, ExtremalPair which, const McConfig& cfg) {
  require_p(p);
  require_samples(cfg, 10'000);
  const LpSpace space{p, n};
  space.validate(kMinDiagonalDimension);
  const double c = ratio_coefficient_diag(space);
  const std::size_t m = static_cast<std::size_t>(n);

  auto make_kernel = [&] {
    return [g = RowDraw(p, m), gbar = RowDraw(p, m), which, c](Xoshiro256pp& rng,
                                                               double* out) mutable {
      g.fill(rng);
      gbar.fill(rng);
      const double y4 = g.signed_pm1[0] + g.signed_pm1[1] + g.signed_pm1[2] + g.signed_pm1[3];
      const double z = g.signed_sum - y4;
      const double yb2 = gbar.signed_pm1[0] + gbar.signed_pm1[1];
      const double zb = gbar.signed_sum - yb2;
      const std::array<double, 6> x{g.g[0], g.g[1], g.g[2], g.g[3], gbar.g[0], gbar.g[1]};
      const double hv = extremal_h(which, c, x);
      const double d = std::abs(y4) >= std::abs(z) ? std::abs(y4) - std::abs(z) : 0.0;
      const double db = std::abs(yb2) >= std::abs(zb) ? std::abs(yb2) - std::abs(zb) : 0.0;
      out[0] = hv * std::abs(y4 + z) * std::abs(yb2 + zb);
      out[1] = hv;
      out[2] = std::abs(z);
      out[3] = std::abs(zb);
      out[4] = hv * d;
      out[5] = hv * db;
      out[6] = hv * d * db;
    };
  };
  const BatchSums sums = run_batched(cfg, 7, make_kernel);
  auto rhs = [](std::span<const double> mm) {
    return mm[1] * mm[2] * mm[3] + mm[3] * mm[4] + mm[2] * mm[5] + mm[6];
  };
  FourTermReport rep;
  rep.lhs = finish(sums, cfg, [](std::span<const double> mm) { return mm[0]; }, "mc");
  rep.rhs = finish(sums, cfg, rhs, "mc");
  rep.difference = finish(sums, cfg, [&](std::span<const double> mm) { return mm[0] - rhs(mm); }, "mc");
  const auto t = sums.total();
  const double N = static_cast<double>(cfg.samples);
  std::array<double, 7> mm;
  for (int j = 0; j < 7; ++j) mm[j] = t[j] / N;
  rep.terms = {mm[1] * mm[2] * mm[3], mm[3] * mm[4], mm[2] * mm[5], mm[6]};
  return rep;
}

// ---------------------------------------------------------------------------

PsiSurvey psi_scaling_survey(int n, const std::vector<double>& p_grid, const McConfig& cfg) {
  require_samples(cfg, 10'000);
  if (n < 2) throw DomainError("psi_scaling_survey: n must be >= 2");
  if (p_grid.empty()) throw PreconditionError("psi_scaling_survey: empty p grid");
  for (double p : p_grid) {
    require_p(p);
    if (p > n) throw DomainError("psi_scaling_survey: p must not exceed n");
  }
  PsiSurvey survey;
  survey.n = n;
  const std::size_t m = static_cast<std::size_t>(n);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t idx = 0; idx < p_grid.size(); ++idx) {
    const double p = p_grid[idx];
    McConfig sub = cfg;
    sub.seed = derive_seed(cfg.seed, idx);
    const double scale = std::sqrt(p) * inv_sqrt_n;
    auto make_kernel = [&] {
      return [row = RowDraw(p, m), scale](Xoshiro256pp& rng, double* out) mutable {
        row.fill(rng);
        out[0] = std::abs(row.signed_sum) * scale;
      };
    };
    auto fn = [](std::span<const double> mm) { return mm[0]; };
    survey.rows.push_back({p, finish(run_batched(sub, 1, make_kernel), sub, fn, "mc")});
  }
  survey.min_value = survey.rows.front().scaled_mean.mean;
  survey.max_value = survey.min_value;
  for (const auto& r : survey.rows) {
    survey.min_value = std::min(survey.min_value, r.scaled_mean.mean);
    survey.max_value = std::max(survey.max_value, r.scaled_mean.mean);
  }
  return survey;
}

}  // namespace snc
