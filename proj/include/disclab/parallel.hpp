#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace disclab {

namespace detail {
inline std::atomic<std::size_t>& thread_limit_slot() {
  static std::atomic<std::size_t> slot{0};
  return slot;
}
}  // namespace detail

/// Caps the number of worker threads used by the parallel kernels.
/// Zero restores the default (DISCLAB_THREADS, else hardware concurrency).
inline void set_thread_limit(std::size_t n) { detail::thread_limit_slot() = n; }

inline std::size_t thread_limit() {
  if (auto n = detail::thread_limit_slot().load(); n != 0) return n;
  if (const char* env = std::getenv("DISCLAB_THREADS")) {
    try {
      auto parsed = std::stoul(env);
      if (parsed > 0) return parsed;
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Splits [0, count) into contiguous chunks and runs `fn(begin, end, chunk)`
/// on each, one chunk per worker. Chunk boundaries depend only on `count`
/// and `chunks`, so callers that merge per-chunk results in chunk order get
/// output independent of scheduling.
template <typename Fn>
void parallel_chunks(std::size_t count, std::size_t chunks, Fn&& fn) {
  chunks = std::max<std::size_t>(1, std::min(chunks, count));
  if (chunks == 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t begin = count * c / chunks;
      const std::size_t end = count * (c + 1) / chunks;
      workers.emplace_back([&, begin, end, c] {
        try {
          fn(begin, end, c);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Number of chunks to use for `work` independent items, keeping at least
/// `min_per_chunk` items per chunk.
inline std::size_t chunk_count(std::size_t work, std::size_t min_per_chunk) {
  const std::size_t by_work = std::max<std::size_t>(1, work / std::max<std::size_t>(1, min_per_chunk));
  return std::min(thread_limit(), by_work);
}

}  // namespace disclab
