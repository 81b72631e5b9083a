#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

// Deterministic data-parallel helper: the index range is split into chunks
// and each worker writes only its own slots, so results are identical for
// any worker count.

namespace semijulia {

inline int default_thread_count() {
  if (const char* env = std::getenv("SEMIJULIA_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// fn(begin, end, worker_id) over [0, n) split into `threads` chunks.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2048) {
    fn(std::size_t{0}, n, 0);
    return;
  }
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::size_t chunk = (n + static_cast<std::size_t>(workers) - 1) /
                            static_cast<std::size_t>(workers);
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, w, &fn] { fn(lo, hi, w); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace semijulia
