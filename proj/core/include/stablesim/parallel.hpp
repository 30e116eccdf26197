#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace stablesim {

/// Worker count to use: `requested` as given, or the hardware concurrency
/// (at least 1) when requested == 0.
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Run fn(i) for i in [0, total) across `workers` threads.
///
/// Indices are split into contiguous chunks, so results written to
/// index-addressed slots are identical for any worker count; callers own the
/// deterministic reduction. The first exception thrown by any worker is
/// rethrown after all threads join.
template <typename Fn>
void parallel_for(std::size_t total, unsigned workers, Fn&& fn) {
  workers = resolve_workers(workers);
  if (total == 0) return;
  if (workers <= 1 || total == 1) {
    for (std::size_t i = 0; i < total; ++i) fn(i);
    return;
  }

  const std::size_t n_threads = std::min<std::size_t>(workers, total);
  const std::size_t chunk = (total + n_threads - 1) / n_threads;

  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  std::vector<std::exception_ptr> errors(n_threads);

  for (std::size_t w = 0; w < n_threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(begin + chunk, total);
    threads.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace stablesim
