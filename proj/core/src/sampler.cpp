#include "snc/sampler.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "snc/errors.hpp"

namespace snc {
namespace {

void require_p(double p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw DomainError("sampler: p must be finite and >= 1, got " + std::to_string(p));
  }
}

// Fills `row` with g draws and returns (S^p, sum sign(g)|g|^{p-1}).
struct RowStats {
  double s_pow_p;
  double signed_sum;
};

RowStats fill_row(const GeneralizedGaussian& gen, Xoshiro256pp& rng, std::span<double> row) {
  RowStats st{0.0, 0.0};
  for (double& x : row) {
    for (;;) {
      const auto d = gen.draw(rng);
      // g == 0 has probability zero; redraw to keep sign() well defined.
      if (d.value == 0.0) continue;
      x = d.value;
      st.s_pow_p += d.abs_pow_p;
      st.signed_sum += std::copysign(d.abs_pow_pm1, d.value);
      break;
    }
  }
  return st;
}

}  // namespace

GeneralizedGaussian::GeneralizedGaussian(double p) : p_(p), inv_p_(0.0), kind_(Kind::general) {
  require_p(p);
  inv_p_ = 1.0 / p;
  if (p == 1.0) {
    kind_ = Kind::laplace;
  } else if (p == 2.0) {
    kind_ = Kind::gaussian;
  }
  mt_d_ = (1.0 + inv_p_) - 1.0 / 3.0;
  mt_c_ = 1.0 / std::sqrt(9.0 * mt_d_);
}

double GeneralizedGaussian::gamma_boosted(Xoshiro256pp& rng) const noexcept {
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + mt_c_ * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return mt_d_ * v;
    if (std::log(u) < 0.5 * x2 + mt_d_ * (1.0 - v + std::log(v))) return mt_d_ * v;
  }
}

GeneralizedGaussian::Draw GeneralizedGaussian::draw(Xoshiro256pp& rng) const noexcept {
  switch (kind_) {
    case Kind::laplace: {
      const double w = rng.exponential();
      return {rng.random_sign() * w, w, 1.0};
    }
    case Kind::gaussian: {
      const double g = rng.normal() * std::numbers::sqrt2 * 0.5;
      const double a = std::abs(g);
      return {g, a * a, a};
    }
    case Kind::general:
    default: {
      // W = V U^p with V ~ Gamma(1 + 1/p) is Gamma(1/p); then |g| = V^{1/p} U.
      const double v = gamma_boosted(rng);
      const double u = rng.uniform_open();
      const double a = std::pow(v, inv_p_) * u;
      const double w = v * std::pow(u, p_);
      const double pm1 = a > 0.0 ? w / a : 0.0;
      return {rng.random_sign() * a, w, pm1};
    }
  }
}

double lp_norm(std::span<const double> x, double p) {
  double acc = 0.0;
  for (double v : x) acc += std::pow(std::abs(v), p);
  return std::pow(acc, 1.0 / p);
}

double psi_theta0(std::span<const double> row, double p) {
  require_p(p);
  double acc = 0.0;
  for (double g : row) {
    if (g == 0.0) continue;
    const double mag = p == 1.0 ? 1.0 : std::pow(std::abs(g), p - 1.0);
    acc += std::copysign(mag, g);
  }
  return std::abs(acc) / std::sqrt(static_cast<double>(row.size()));
}

double GBatch::max_s_deviation() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < draws.rows; ++k) {
    double recomputed = lp_norm(draws.row(k), p);
    // A normalized row has norm one; its S was divided out.
    const double expected = normalized ? 1.0 : s_values[k];
    worst = std::max(worst, std::abs(recomputed - expected) / expected);
  }
  return worst;
}

double GBatch::max_psi_deviation() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < psi_values.size(); ++k) {
    double recomputed = psi_theta0(draws.row(k), p);
    if (normalized) recomputed *= std::pow(s_values[k], p - 1.0);
    const double scale = std::max(std::abs(psi_values[k]), 1e-300);
    worst = std::max(worst, std::abs(recomputed - psi_values[k]) / scale);
  }
  return worst;
}

std::vector<double> sample_g(double p, const SeededStream& stream, std::size_t count) {
  if (count < 1) throw DomainError("sample_g: count must be >= 1");
  const GeneralizedGaussian gen(p);
  Xoshiro256pp rng = stream.engine();
  std::vector<double> out(count);
  for (double& x : out) x = gen(rng);
  return out;
}

GBatch sample_gbatch(double p, int m, const SeededStream& stream, std::size_t batch, bool with_psi) {
  if (m < 1) throw DomainError("sample_gbatch: m must be >= 1");
  const GeneralizedGaussian gen(p);
  Xoshiro256pp rng = stream.engine();
  GBatch out;
  out.p = p;
  out.draws = RowMatrix(batch, static_cast<std::size_t>(m));
  out.s_values.resize(batch);
  if (with_psi) out.psi_values.resize(batch);
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t k = 0; k < batch; ++k) {
    const RowStats st = fill_row(gen, rng, out.draws.row(k));
    out.s_values[k] = std::pow(st.s_pow_p, 1.0 / p);
    if (with_psi) out.psi_values[k] = std::abs(st.signed_sum) * inv_sqrt_m;
  }
  return out;
}

GBatch sample_cone(double p, int m, const SeededStream& stream, std::size_t batch) {
  if (m < 2) throw DomainError("sample_cone: m must be >= 2");
  GBatch out = sample_gbatch(p, m, stream, batch, false);
  for (std::size_t k = 0; k < batch; ++k) {
    const double inv_s = 1.0 / out.s_values[k];
    for (double& x : out.draws.row(k)) x *= inv_s;
  }
  out.normalized = true;
  return out;
}

RowMatrix sample_ball_uniform(double p, int n, const SeededStream& stream, std::size_t batch) {
  if (n < 1) throw DomainError("sample_ball_uniform: n must be >= 1");
  const GeneralizedGaussian gen(p);
  Xoshiro256pp rng = stream.engine();
  RowMatrix out(batch, static_cast<std::size_t>(n));
  const double inv_n = 1.0 / n;
  for (std::size_t k = 0; k < batch; ++k) {
    auto row = out.row(k);
    const RowStats st = fill_row(gen, rng, row);
    const double radius = std::pow(rng.uniform_open(), inv_n);
    const double scale = radius / std::pow(st.s_pow_p, 1.0 / p);
    for (double& x : row) x *= scale;
  }
  return out;
}

RatioEstimate weighted_projection_expectation(double p, std::span<const double> theta,
                                              const PointFunction& f, const McConfig& cfg) {
  require_p(p);
  const std::size_t n = theta.size();
  if (n < 2) throw DomainError("weighted_projection_expectation: dimension must be >= 2");
  double norm2 = 0.0;
  for (double t : theta) norm2 += t * t;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-10) {
    throw ValidationError("weighted_projection_expectation: theta must be a unit vector");
  }
  if (cfg.samples < 2) throw DomainError("weighted_projection_expectation: need >= 2 samples");

  const std::vector<double> th(theta.begin(), theta.end());
  auto make_kernel = [&] {
    return [gen = GeneralizedGaussian(p), th, &f, p, n, g = std::vector<double>(n),
            x = std::vector<double>(n), pm1 = std::vector<double>(n)](Xoshiro256pp& rng,
                                                                       double* out) mutable {
      double s_pow_p = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        GeneralizedGaussian::Draw d = gen.draw(rng);
        while (d.value == 0.0) d = gen.draw(rng);
        g[i] = d.value;
        pm1[i] = std::copysign(d.abs_pow_pm1, d.value);
        s_pow_p += d.abs_pow_p;
      }
      const double s = std::pow(s_pow_p, 1.0 / p);
      double weighted = 0.0;
      double along = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        weighted += pm1[i] * th[i];
        along += g[i] * th[i];
      }
      const double w = std::abs(weighted) / std::pow(s, p - 1.0);
      for (std::size_t i = 0; i < n; ++i) x[i] = (g[i] - along * th[i]) / s;
      const double fw = f(x) * w;
      out[0] = fw;
      out[1] = w;
      out[2] = fw * fw;
      out[3] = w * w;
      out[4] = fw * w;
    };
  };
  const BatchSums sums = run_batched(cfg, 5, make_kernel);
  const auto t = sums.total();
  const double N = static_cast<double>(cfg.samples);
  const double m_fw = t[0] / N;
  const double m_w = t[1] / N;
  const double var_fw = std::max(0.0, t[2] / N - m_fw * m_fw);
  const double var_w = std::max(0.0, t[3] / N - m_w * m_w);
  const double cov = t[4] / N - m_fw * m_w;
  const double se_w = std::sqrt(var_w / (N - 1.0));
  if (!(m_w > 3.0 * se_w)) {
    throw UnstableEstimateError("weighted_projection_expectation: weight mean " +
                                std::to_string(m_w) + " within 3 SE of zero");
  }
  const double ratio = t[0] / t[1];
  const double var_ratio =
      std::max(0.0, (var_fw - 2.0 * ratio * cov + ratio * ratio * var_w)) / (m_w * m_w) / (N - 1.0);

  RatioEstimate r;
  r.estimate = {ratio, std::sqrt(var_ratio), cfg.samples, cfg.seed, "mc-weighted"};
  r.weight_mean = m_w;
  r.weight_std_error = se_w;
  return r;
}

}  // namespace snc
