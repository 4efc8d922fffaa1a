#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace pgx {

// Process-wide worker cap (settable from the CLI via --threads / PGX_THREADS).
int max_threads();
void set_max_threads(int n);

// Runs fn(i) for i in [0, n). Work items must be independent; results must not
// depend on scheduling (each item derives its own RNG stream from its index).
inline void parallel_for(int n, const std::function<void(int)>& fn) {
  int workers = std::min(max_threads(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace pgx
