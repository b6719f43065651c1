#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace chainlight {

// Worker count resolution: explicit request > CHAINLIGHT_THREADS environment
// variable > hardware concurrency.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CHAINLIGHT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, n) on `workers` threads. Callers write results into
// preallocated slots indexed by i, so output assembly stays deterministic.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::min(std::max(workers, 1), std::max(n, 1));
  if (workers == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([=, &fn] {
      for (int i = w; i < n; i += workers) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace chainlight
