#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace sdfhoi {

// Worker count: SDFHOI_THREADS caps it, hardware concurrency bounds it,
// default cap is 4.
inline int worker_count(int requested = 0) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int cap = 4;
  if (const char* env = std::getenv("SDFHOI_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) cap = v;
  }
  int n = requested > 0 ? requested : cap;
  return std::clamp(n, 1, hw);
}

// Runs fn(i) for i in [0, n) on `threads` workers with a strided static
// partition (worker w handles i = w, w+T, w+2T, ...). The partition depends
// only on (n, threads), never on scheduling, so any per-worker accumulation
// combined in worker order is reproducible.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (n == 0) return;
  const int t = std::clamp<int>(threads, 1, static_cast<int>(n));
  if (t == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < n;
           i += static_cast<std::size_t>(t))
        fn(i, w);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace sdfhoi
