#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace matreg {

/// Run fn(i) for i in [0, count) on up to n_threads workers. Tasks must keep
/// independent state; results should be written to pre-sized per-index slots
/// so the outcome is deterministic regardless of scheduling. The first task
/// exception is rethrown after all workers join.
inline void parallel_for(int n_threads, long count, const std::function<void(long)>& fn) {
  if (count <= 0) return;
  if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min<long>(n_threads, count) > 0
                              ? static_cast<int>(std::min<long>(n_threads, count))
                              : 1);
  if (n_threads == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    workers.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace matreg
