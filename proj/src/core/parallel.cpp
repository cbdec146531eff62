#include "parallel.hpp"

#include <algorithm>
#include <cstdlib>

namespace mtlab {

int effective_threads(int requested) {
  if (requested > 0) return requested;
  if (const char *env = std::getenv("MTLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(std::uint64_t count, const std::function<void(std::uint64_t)> &work,
                  int threads) {
  const int nthreads =
      static_cast<int>(std::min<std::uint64_t>(effective_threads(threads), count));
  if (nthreads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        work(i);
      }
    });
  }
  for (auto &th : pool) th.join();
}

}  // namespace mtlab
