#pragma once

#include <cstdint>
#include <limits>

namespace snc {

// xoshiro256++ (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256pp(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the Marsaglia polar method (second value cached).
  double normal() noexcept;

  /// Standard exponential.
  double exponential() noexcept;

  /// +1 or -1 with equal probability.
  double random_sign() noexcept { return ((*this)() >> 63) ? 1.0 : -1.0; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// A (master seed, stream index) pair naming an independent substream. The
// engine state is a hash of both, so the same pair always reproduces the same
// draws regardless of which thread consumes it.
struct SeededStream {
  std::uint64_t master_seed;
  std::uint64_t stream_index;

  Xoshiro256pp engine() const;
  SeededStream substream(std::uint64_t index) const;
};

/// Gamma(shape, 1). Marsaglia-Tsang squeeze for shape >= 1; below 1 the
/// shape is boosted by one and the draw multiplied by U^{1/shape}.
double sample_gamma(double shape, Xoshiro256pp& rng);

}  // namespace snc
