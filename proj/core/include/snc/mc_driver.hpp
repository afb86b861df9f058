#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "snc/rng.hpp"

namespace snc {

// Samples per substream. Chunk c always draws from SeededStream{seed, c}, so
// results do not depend on how chunks are spread over workers.
inline constexpr std::uint64_t kChunkSize = std::uint64_t{1} << 16;

inline constexpr int kBatchCount = 32;

struct McConfig {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  unsigned threads = 1;  // 0 = hardware concurrency
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string method;
};

unsigned resolve_threads(unsigned requested);

// Per-batch sums of a fixed number of per-sample quantities. Sample s of N
// belongs to batch floor(s * B / N).
class BatchSums {
 public:
  BatchSums(int batches, std::size_t width)
      : batches_(batches), width_(width), data_(static_cast<std::size_t>(batches) * width, 0.0) {}

  int batches() const noexcept { return batches_; }
  std::size_t width() const noexcept { return width_; }

  std::span<const double> batch(int b) const {
    return {data_.data() + static_cast<std::size_t>(b) * width_, width_};
  }
  std::span<double> batch(int b) { return {data_.data() + static_cast<std::size_t>(b) * width_, width_}; }

  std::vector<double> total() const;

  // Sample count of batch b given the total.
  static std::uint64_t batch_size(std::uint64_t samples, int batches, int b);

 private:
  int batches_;
  std::size_t width_;
  std::vector<double> data_;
};

// Runs `samples` independent evaluations of a per-sample kernel and returns
// the batch sums. `make_kernel()` is called once per worker and must return a
// callable `void(Xoshiro256pp&, double* out)` writing `width` values. Partial
// sums are reduced in chunk order, so the result is bit-identical for any
// thread count.
template <class MakeKernel>
BatchSums run_batched(const McConfig& cfg, std::size_t width, MakeKernel&& make_kernel,
                      int batches = kBatchCount) {
  const std::uint64_t n = cfg.samples;
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  const std::size_t slot = static_cast<std::size_t>(batches) * width;
  std::vector<double> partial(chunks * slot, 0.0);

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      auto kernel = make_kernel();
      std::vector<double> values(width);
      for (;;) {
        const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= chunks) break;
        Xoshiro256pp rng = SeededStream{cfg.seed, c}.engine();
        double* out = partial.data() + c * slot;
        const std::uint64_t begin = c * kChunkSize;
        const std::uint64_t end = std::min(n, begin + kChunkSize);
        for (std::uint64_t s = begin; s < end; ++s) {
          const auto b = static_cast<std::size_t>(s * static_cast<std::uint64_t>(batches) / n);
          kernel(rng, values.data());
          double* dst = out + b * width;
          for (std::size_t j = 0; j < width; ++j) dst[j] += values[j];
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(chunks);
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(cfg.threads), std::max<std::uint64_t>(chunks, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  BatchSums sums(batches, width);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    const double* src = partial.data() + c * slot;
    for (int b = 0; b < batches; ++b) {
      auto dst = sums.batch(b);
      for (std::size_t j = 0; j < width; ++j) dst[j] += src[static_cast<std::size_t>(b) * width + j];
    }
  }
  return sums;
}

// Functional of per-batch *means* (sums divided by the batch sample count).
using MeanFunctional = std::function<double(std::span<const double>)>;

struct BatchMeansResult {
  double point;                      // functional of the pooled means
  double std_error;                  // sd of per-batch values / sqrt(B)
  std::vector<double> batch_values;  // functional of each batch's means
};

BatchMeansResult batch_means(const BatchSums& sums, std::uint64_t samples, const MeanFunctional& fn);

// Joint standard error of a difference of two independent estimates.
double joint_std_error(double a, double b);

}  // namespace snc
