#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace damt {

// Deterministic work splitting: items are partitioned into fixed-size chunks
// (chunk count depends only on the item count, never on the thread count) and
// workers claim chunks from a shared counter.  Callers that reduce must store
// per-chunk partials and merge them in chunk order after this returns; that
// makes the result independent of both scheduling and the thread cap.
inline constexpr std::size_t kDefaultChunk = 256;

inline std::size_t chunk_count(std::size_t n_items, std::size_t chunk_size) {
  return (n_items + chunk_size - 1) / chunk_size;
}

// fn(chunk_index, begin, end) is called exactly once per chunk.
inline void for_each_chunk(std::size_t n_items, std::size_t threads,
                           const std::function<void(std::size_t, std::size_t,
                                                    std::size_t)>& fn,
                           std::size_t chunk_size = kDefaultChunk) {
  const std::size_t chunks = chunk_count(n_items, chunk_size);
  if (chunks == 0) return;
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = std::min(threads, chunks);

  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t begin = c * chunk_size;
      fn(c, begin, std::min(begin + chunk_size, n_items));
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= chunks) return;
        const std::size_t begin = c * chunk_size;
        fn(c, begin, std::min(begin + chunk_size, n_items));
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace damt
