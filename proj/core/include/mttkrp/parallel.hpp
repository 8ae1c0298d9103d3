#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mttkrp {

/// Runs body(z) once for every partition id z in [0, kappa). In
/// deterministic mode the partitions run in id order on the calling thread.
/// Otherwise OS threads claim partition ids from a shared counter; the
/// first exception thrown by any worker is rethrown after the join.
template <typename Fn>
void for_each_partition(std::size_t kappa, bool deterministic, Fn&& body) {
  if (deterministic || kappa <= 1) {
    for (std::size_t z = 0; z < kappa; ++z) body(z);
    return;
  }

  unsigned hw = std::thread::hardware_concurrency();
  const std::size_t n_threads = std::min<std::size_t>(kappa, hw < 2 ? 2 : hw);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      std::size_t z = next.fetch_add(1, std::memory_order_relaxed);
      if (z >= kappa) return;
      try {
        body(z);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mttkrp
