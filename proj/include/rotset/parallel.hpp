// Minimal deterministic parallel-for: each index owns its output slot, so
// results do not depend on the thread count or schedule.
#ifndef ROTSET_PARALLEL_HPP
#define ROTSET_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rotset {

/// Number of worker threads used by library routines; 0 means hardware
/// concurrency. Set once per process (the CLI does this from --threads).
inline std::atomic<int>& thread_setting() {
  static std::atomic<int> threads{1};
  return threads;
}

inline int worker_count() {
  int t = thread_setting().load();
  if (t <= 0) t = int(std::max(1u, std::thread::hardware_concurrency()));
  return t;
}

template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::size_t(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rotset

#endif  // ROTSET_PARALLEL_HPP
