#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stochca {

/// Runs body(task, worker) for task in [0, tasks) on `threads` workers.
/// Tasks are handed out dynamically, so bodies must write only to per-task or
/// per-worker state; the first exception is rethrown after all workers join.
template <class Body>
void parallel_for(std::size_t tasks, std::size_t threads, Body&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, tasks));
  if (threads == 1) {
    for (std::size_t task = 0; task < tasks; ++task) body(task, std::size_t{0});
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t task = next++; task < tasks; task = next++) body(task, w);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = tasks;
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Worker count for a user-supplied thread option; 0 means all cores.
inline std::size_t resolve_threads(std::size_t requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace stochca
