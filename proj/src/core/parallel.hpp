#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "rng.hpp"

namespace mtlab {

// Worker cap: explicit argument > MTLAB_THREADS env > hardware concurrency.
int effective_threads(int requested = 0);

// Runs work(i) for i in [0, count) on up to `threads` workers.  Callers own
// any cross-task state; tasks must be independent.
void parallel_for(std::uint64_t count, const std::function<void(std::uint64_t)> &work,
                  int threads = 0);

// Monte Carlo accumulator.  Sampling is split into fixed-size chunks; chunk
// c always draws from Rng(seed, stream0 + c) and partial sums are reduced
// in chunk order, so the result is bit-identical no matter how chunks are
// assigned to workers.
struct McMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;

  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  double std_error() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double var = (sum_sq - sum * sum / n) / (n - 1.0);
    return var > 0.0 ? std::sqrt(var / n) : 0.0;
  }
};

inline constexpr std::uint64_t kMcChunk = 1u << 14;

// draw(rng) -> one sample value
template <class Draw>
McMoments mc_moments(std::uint64_t seed, std::uint64_t samples, Draw &&draw,
                     int threads = 0, std::uint64_t stream0 = 0) {
  const std::uint64_t nchunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<McMoments> partial(nchunks);
  parallel_for(
      nchunks,
      [&](std::uint64_t c) {
        Rng rng(seed, stream0 + c);
        const std::uint64_t lo = c * kMcChunk;
        const std::uint64_t len = std::min<std::uint64_t>(kMcChunk, samples - lo);
        McMoments m;
        for (std::uint64_t i = 0; i < len; ++i) {
          const double x = draw(rng);
          m.sum += x;
          m.sum_sq += x * x;
        }
        m.count = len;
        partial[c] = m;
      },
      threads);
  McMoments total;
  for (const auto &m : partial) {  // fixed order: deterministic reduction
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
    total.count += m.count;
  }
  return total;
}

// Hit counting for indicator integrands (binomial standard error).
template <class Predicate>
std::uint64_t mc_hits(std::uint64_t seed, std::uint64_t samples, Predicate &&hit,
                      int threads = 0, std::uint64_t stream0 = 0) {
  const std::uint64_t nchunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<std::uint64_t> partial(nchunks, 0);
  parallel_for(
      nchunks,
      [&](std::uint64_t c) {
        Rng rng(seed, stream0 + c);
        const std::uint64_t lo = c * kMcChunk;
        const std::uint64_t len = std::min<std::uint64_t>(kMcChunk, samples - lo);
        std::uint64_t h = 0;
        for (std::uint64_t i = 0; i < len; ++i)
          if (hit(rng)) ++h;
        partial[c] = h;
      },
      threads);
  std::uint64_t total = 0;
  for (auto h : partial) total += h;
  return total;
}

}  // namespace mtlab
