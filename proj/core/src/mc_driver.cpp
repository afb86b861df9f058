#include "snc/mc_driver.hpp"

#include <cmath>

#include "snc/errors.hpp"

namespace snc {

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<double> BatchSums::total() const {
  std::vector<double> t(width_, 0.0);
  for (int b = 0; b < batches_; ++b) {
    const auto row = batch(b);
    for (std::size_t j = 0; j < width_; ++j) t[j] += row[j];
  }
  return t;
}

std::uint64_t BatchSums::batch_size(std::uint64_t samples, int batches, int b) {
  // Number of s in [0, samples) with floor(s * B / N) == b.
  const auto B = static_cast<std::uint64_t>(batches);
  const auto first = [&](std::uint64_t k) { return (k * samples + B - 1) / B; };
  return first(static_cast<std::uint64_t>(b) + 1) - first(static_cast<std::uint64_t>(b));
}

BatchMeansResult batch_means(const BatchSums& sums, std::uint64_t samples, const MeanFunctional& fn) {
  const int B = sums.batches();
  if (samples < static_cast<std::uint64_t>(B)) {
    throw PreconditionError("batch means need at least one sample per batch");
  }
  const std::size_t w = sums.width();

  std::vector<double> means(w);
  const auto total = sums.total();
  for (std::size_t j = 0; j < w; ++j) means[j] = total[j] / static_cast<double>(samples);

  BatchMeansResult result;
  result.point = fn(means);
  result.batch_values.reserve(B);
  for (int b = 0; b < B; ++b) {
    const double count = static_cast<double>(BatchSums::batch_size(samples, B, b));
    const auto row = sums.batch(b);
    for (std::size_t j = 0; j < w; ++j) means[j] = row[j] / count;
    result.batch_values.push_back(fn(means));
  }
  double mu = 0.0;
  for (double v : result.batch_values) mu += v;
  mu /= B;
  double ss = 0.0;
  for (double v : result.batch_values) ss += (v - mu) * (v - mu);
  result.std_error = std::sqrt(ss / (B - 1) / B);
  return result;
}

double joint_std_error(double a, double b) { return std::hypot(a, b); }

}  // namespace snc
