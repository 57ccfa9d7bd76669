#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace ph {

// Global worker count for parallel regions; 1 disables threading.
void set_thread_count(int n);
int thread_count();

// Static block partition of [0, n); each chunk writes disjoint outputs, so
// results are bit-identical for any thread count.
inline void parallel_for(int n, const std::function<void(int, int)>& body) {
  const int workers = std::min(thread_count(), std::max(1, n));
  if (workers <= 1 || n <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    const int lo = static_cast<int>(static_cast<long long>(n) * w / workers);
    const int hi = static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ph
