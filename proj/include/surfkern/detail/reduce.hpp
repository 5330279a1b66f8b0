#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "surfkern/types.hpp"

namespace surfkern::detail {

/// Pairwise (tree) accumulation. The grouping depends only on the buffer
/// length, so the result is reproducible for a given term sequence.
inline Real pairwise_sum(std::span<const Real> terms) {
  if (terms.size() <= 8) {
    Real sum = 0.0;
    for (const Real t : terms) sum += t;
    return sum;
  }
  const std::size_t half = terms.size() / 2;
  return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(begin, end) over a static block partition of [0, count).
/// Each index belongs to exactly one block, so per-index outputs never
/// depend on the number of threads. Exceptions from workers are rethrown.
template <typename Body>
void parallel_for(Index count, int threads, Body&& body) {
  const int want = resolve_thread_count(threads);
  const int pool_size =
      static_cast<int>(std::min<Index>(want, std::max<Index>(count, 1)));
  if (pool_size <= 1) {
    body(Index{0}, count);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(pool_size));
  for (int k = 0; k < pool_size; ++k) {
    const Index begin = count * k / pool_size;
    const Index end = count * (k + 1) / pool_size;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace surfkern::detail
