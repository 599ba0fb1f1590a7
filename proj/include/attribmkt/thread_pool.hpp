#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace attribmkt {

/// Worker count for grid sweeps: hardware concurrency, capped by the
/// ATTRIBMKT_THREADS environment variable when set.
inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* cap = std::getenv("ATTRIBMKT_THREADS")) {
    const long requested = std::strtol(cap, nullptr, 10);
    if (requested >= 1 && static_cast<unsigned>(requested) < n)
      n = static_cast<unsigned>(requested);
  }
  return n;
}

/// Runs fn(i) for i in [0, n) on a bounded worker pool. Items are claimed
/// through an atomic counter; results must be written into per-index slots
/// so the assembly stays order-independent. Exceptions in workers are
/// rethrown on the calling thread.
inline void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  const unsigned workers = std::min<size_t>(worker_count(), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace attribmkt
