#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace otbdp {

/// Fixed chunk length for sample-parallel loops. Reductions are always
/// performed chunk by chunk in chunk order, so results do not depend on the
/// number of worker threads.
inline constexpr std::size_t kChunkSize = 16384;

/// Process-wide cap on worker threads (0 restores the hardware default).
void set_max_threads(unsigned threads);
unsigned max_threads();

/// Calls fn(chunk_index, begin, end) for every chunk of [0, count).
/// Chunks may run concurrently; callers store per-chunk partials and reduce
/// them in chunk order.
template <class Fn>
void for_each_chunk(std::size_t count, Fn&& fn, std::size_t chunk = kChunkSize) {
  if (count == 0) return;
  const std::size_t chunks = (count + chunk - 1) / chunk;
  const auto run = [&](std::size_t c) {
    const std::size_t begin = c * chunk;
    fn(c, begin, std::min(count, begin + chunk));
  };
  const std::size_t workers = std::min<std::size_t>(max_threads(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t c = next++; c < chunks; c = next++) {
        try {
          run(c);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

inline std::size_t chunk_count(std::size_t count, std::size_t chunk = kChunkSize) {
  return (count + chunk - 1) / chunk;
}

}  // namespace otbdp
