#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace positools {

// POSITOOLS_THREADS caps worker count; defaults to hardware concurrency.
inline int thread_budget() {
  if (const char* env = std::getenv("POSITOOLS_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(i) for i in [0, count). Callers write results into pre-sized
// slots indexed by i, so reduction order stays deterministic.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t budget = static_cast<std::size_t>(thread_budget());
  const std::size_t workers = budget < count ? budget : count;
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace positools
