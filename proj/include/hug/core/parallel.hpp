#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hug {

/// Worker count: explicit `requested` wins, then the HUG_GEOM_THREADS
/// environment variable, then hardware concurrency. 0 means "auto".
inline int resolve_thread_count(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HUG_GEOM_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn over [begin,end) split into contiguous chunks, one per worker:
/// fn(chunk_begin, chunk_end, worker_index). Blocks until all chunks finish.
/// Chunk boundaries depend only on (begin, end, workers), never on timing,
/// so deterministic kernels stay deterministic under any worker count.
inline void parallel_chunks(std::size_t begin, std::size_t end, int workers,
                            const std::function<void(std::size_t, std::size_t, int)>& fn) {
  std::size_t n = end > begin ? end - begin : 0;
  if (n == 0) return;
  int k = workers < 1 ? 1 : workers;
  if (static_cast<std::size_t>(k) > n) k = static_cast<int>(n);
  if (k == 1) {
    fn(begin, end, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(k);
  std::size_t chunk = (n + k - 1) / k;
  for (int w = 0; w < k; ++w) {
    std::size_t lo = begin + chunk * w;
    std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([=, &fn] { fn(lo, hi, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace hug
