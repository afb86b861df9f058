#include "snc/rng.hpp"

#include <cmath>

#include "snc/errors.hpp"

namespace snc {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

double Xoshiro256pp::normal() noexcept {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform_open() - 1.0;
    v = 2.0 * uniform_open() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * factor;
  has_cached_normal_ = true;
  return u * factor;
}

double Xoshiro256pp::exponential() noexcept { return -std::log(uniform_open()); }

Xoshiro256pp SeededStream::engine() const {
  // Two rounds of splitmix decorrelate neighbouring (seed, index) pairs before
  // the engine's own seeding expands the result.
  std::uint64_t h = master_seed;
  const std::uint64_t a = splitmix64(h);
  std::uint64_t k = stream_index ^ 0xd1b54a32d192ed03ULL;
  const std::uint64_t b = splitmix64(k);
  return Xoshiro256pp(a ^ (b * 0x9e3779b97f4a7c15ULL));
}

SeededStream SeededStream::substream(std::uint64_t index) const {
  std::uint64_t h = master_seed ^ (stream_index * 0xbf58476d1ce4e5b9ULL);
  return {splitmix64(h), index};
}

double sample_gamma(double shape, Xoshiro256pp& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("sample_gamma: shape must be finite and > 0");
  }
  if (shape < 1.0) {
    const double u = rng.uniform_open();
    return sample_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace snc
