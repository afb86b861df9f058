#include "snc/extremal.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "snc/errors.hpp"
#include "snc/rng.hpp"

namespace snc {
namespace {

using Vec = std::vector<double>;

double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void remove_mean(Vec& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  for (double& v : x) v -= m;
}

// Riemannian gradient of t at (a, b) on the (mean-zero) Stiefel manifold.
void riemannian_gradient(const Vec& a, const Vec& b, PairMode mode, Vec& ga, Vec& gb) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    ga[i] = 2.0 * a[i] * b[i] * b[i];
    gb[i] = 2.0 * b[i] * a[i] * a[i];
  }
  if (mode == PairMode::diagonal) {
    remove_mean(ga);
    remove_mean(gb);
  }
  // G - X sym(X^T G) with X = [a b].
  const double aa = dot(a, ga);
  const double bb = dot(b, gb);
  const double ab = 0.5 * (dot(a, gb) + dot(b, ga));
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a[i], bi = b[i];
    ga[i] -= ai * aa + bi * ab;
    gb[i] -= ai * ab + bi * bb;
  }
}

struct AscentOutcome {
  Vec a, b;
  double value;
  int iterations;
};

AscentOutcome ascend(Vec a, Vec b, PairMode mode, const OptimizerOptions& opts) {
  const std::size_t n = a.size();
  Vec ga(n), gb(n), ta(n), tb(n);
  double value = overlap_t(a, b);
  double step = opts.initial_step / static_cast<double>(n);
  int it = 0;
  int stalled = 0;
  for (; it < opts.max_iterations && stalled < 25; ++it) {
    riemannian_gradient(a, b, mode, ga, gb);
    const double g2 = dot(ga, ga) + dot(gb, gb);
    if (std::sqrt(g2) < opts.gradient_tolerance) break;
    bool accepted = false;
    while (step > 1e-18) {
      for (std::size_t i = 0; i < n; ++i) {
        ta[i] = a[i] + step * ga[i];
        tb[i] = b[i] + step * gb[i];
      }
      if (orthonormalize(ta, tb, mode)) {
        const double candidate = overlap_t(ta, tb);
        if (candidate >= value + opts.armijo * step * g2) {
          // Gains below rounding of t no longer move the iterate.
          stalled = candidate > value ? 0 : stalled + 1;
          a.swap(ta);
          b.swap(tb);
          value = candidate;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
    step = std::min(step * 2.0, 10.0);
  }
  // Polish: near the optimum value differences drown in rounding, so accept
  // steps by the decrease of the gradient norm instead.
  riemannian_gradient(a, b, mode, ga, gb);
  double g2 = dot(ga, ga) + dot(gb, gb);
  Vec ha(n), hb(n);
  for (int k = 0; k < 500 && std::sqrt(g2) > opts.gradient_tolerance && step > 1e-18; ++k, ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      ta[i] = a[i] + step * ga[i];
      tb[i] = b[i] + step * gb[i];
    }
    if (!orthonormalize(ta, tb, mode)) {
      step *= 0.5;
      continue;
    }
    riemannian_gradient(ta, tb, mode, ha, hb);
    const double h2 = dot(ha, ha) + dot(hb, hb);
    if (h2 < g2) {
      a.swap(ta);
      b.swap(tb);
      ga.swap(ha);
      gb.swap(hb);
      g2 = h2;
      step = std::min(step * 1.5, 10.0);
    } else {
      step *= 0.5;
    }
  }
  value = overlap_t(a, b);
  return {std::move(a), std::move(b), value, it};
}

constexpr double kTieTolerance = 1e-12;

}  // namespace

double overlap_bound(PairMode mode) { return mode == PairMode::sphere ? 0.5 : 0.25; }

ExtremalResult maximize_overlap(int n, PairMode mode, int restarts, std::uint64_t seed,
                                const OptimizerOptions& opts) {
  const int min_n = mode == PairMode::sphere ? 2 : 4;
  if (n < min_n) throw DomainError("maximize_overlap: n too small for " + to_string(mode) + " mode");
  if (restarts < 1) throw DomainError("maximize_overlap: restarts must be >= 1");

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(restarts));
  AscentOutcome best{{}, {}, -1.0, 0};
  int best_index = 0;
  for (int r = 0; r < restarts; ++r) {
    Xoshiro256pp rng = SeededStream{seed, static_cast<std::uint64_t>(r)}.engine();
    const OrthoPair start = OrthoPair::random(n, mode, rng);
    AscentOutcome out = ascend(start.eta1(), start.eta2(), mode, opts);
    values.push_back(out.value);
    // Values equal up to rounding count as ties; the earlier restart wins.
    if (out.value > best.value + kTieTolerance) {
      best = std::move(out);
      best_index = r;
    }
  }
  OrthoPair pair(best.a, best.b, mode);
  const double residual = stationarity_residual(pair, mode);
  return ExtremalResult{best.value, std::move(pair), restarts, best_index, best.iterations, residual,
                        std::move(values)};
}

StationarityFit fit_multipliers(const Vec& a, const Vec& b, PairMode mode) {
  const Eigen::Index n = static_cast<Eigen::Index>(a.size());
  const bool diag = mode == PairMode::diagonal;
  // Unknowns: A, A2, B, (C, C2).
  const Eigen::Index k = diag ? 5 : 3;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, k);
  Eigen::VectorXd rhs(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ai = a[static_cast<std::size_t>(i)], bi = b[static_cast<std::size_t>(i)];
    m(i, 0) = ai;
    m(i, 2) = bi;
    rhs(i) = ai * bi * bi;
    m(n + i, 1) = bi;
    m(n + i, 2) = ai;
    rhs(n + i) = ai * ai * bi;
    if (diag) {
      m(i, 3) = 1.0;
      m(n + i, 4) = 1.0;
    }
  }
  const Eigen::VectorXd x = m.colPivHouseholderQr().solve(rhs);
  StationarityFit fit;
  fit.a = x(0);
  fit.a2 = x(1);
  fit.b = x(2);
  if (diag) {
    fit.c = x(3);
    fit.c2 = x(4);
  }
  fit.residual = (m * x - rhs).cwiseAbs().maxCoeff();
  return fit;
}

double stationarity_residual(const OrthoPair& pair, PairMode mode) {
  Vec a = pair.eta1(), b = pair.eta2();
  double worst = fit_multipliers(a, b, mode).residual;
  worst = std::max(worst, fit_multipliers(b, a, mode).residual);
  Vec neg_a = a;
  for (double& v : neg_a) v = -v;
  worst = std::max(worst, fit_multipliers(neg_a, b, mode).residual);
  worst = std::max(worst, fit_multipliers(b, neg_a, mode).residual);
  return worst;
}

double brute_force_overlap_max(int n, PairMode mode, int grid_density, std::uint64_t seed) {
  if (n < 2 || n > 6) throw DomainError("brute_force_overlap_max: n must be in [2, 6]");
  if (mode == PairMode::diagonal && n < 3) throw DomainError("brute_force_overlap_max: diagonal needs n >= 3");
  double best = 0.0;
  const std::size_t un = static_cast<std::size_t>(n);

  int total = 1;
  for (int i = 0; i < 2 * n; ++i) total *= 3;
  Vec a(un), b(un);
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (std::size_t i = 0; i < un; ++i) {
      a[i] = static_cast<double>(c % 3 - 1);
      c /= 3;
    }
    for (std::size_t i = 0; i < un; ++i) {
      b[i] = static_cast<double>(c % 3 - 1);
      c /= 3;
    }
    Vec pa = a, pb = b;
    if (!orthonormalize(pa, pb, mode)) continue;
    if (!OrthoPair::check(pa, pb, mode).empty()) continue;
    best = std::max(best, overlap_t(pa, pb));
  }

  Xoshiro256pp rng = SeededStream{seed, 0}.engine();
  for (int k = 0; k < grid_density; ++k) {
    const OrthoPair pr = OrthoPair::random(n, mode, rng);
    best = std::max(best, overlap_t(pr));
  }
  return best;
}

OrthoPair diagonal_overlap_maximizer(int n) {
  if (n < 4) throw DomainError("diagonal_overlap_maximizer: n must be >= 4");
  const std::size_t un = static_cast<std::size_t>(n);
  Vec a(un, 0.0), b(un, -2.0 / n);
  a[0] = 1.0;
  a[1] = -1.0;
  b[0] += 1.0;
  b[1] += 1.0;
  if (!orthonormalize(a, b, PairMode::diagonal)) throw InvariantError("diagonal_overlap_maximizer");
  return OrthoPair(std::move(a), std::move(b), PairMode::diagonal);
}

double diagonal_overlap_supremum(int n) {
  if (n < 4) throw DomainError("diagonal_overlap_supremum: n must be >= 4");
  return 0.5 - 1.0 / n;
}

std::vector<double> magnitude_clusters(const Vec& v, double zero_tol, double tol) {
  Vec mags;
  for (double x : v) {
    if (std::abs(x) > zero_tol) mags.push_back(std::abs(x));
  }
  std::sort(mags.begin(), mags.end());
  Vec clusters;
  for (double m : mags) {
    if (clusters.empty() || m - clusters.back() > tol) clusters.push_back(m);
  }
  return clusters;
}

}  // namespace snc
