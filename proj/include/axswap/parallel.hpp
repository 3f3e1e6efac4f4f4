#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "axswap/common.hpp"

namespace axswap {

/// Default worker count: AXSWAP_THREADS env var, else hardware concurrency.
unsigned default_thread_count();

/// Splits [0, total) into fixed-size chunks, evaluates fn(chunk_begin,
/// chunk_end) on a worker pool, and returns the partial results in chunk
/// order. The chunking (and therefore any reduction done in chunk order) is
/// independent of the thread count, which keeps merged results deterministic.
template <typename Partial, typename Fn>
std::vector<Partial> chunked_map(u64 total, u64 chunk_size, unsigned threads, Fn&& fn) {
  if (chunk_size == 0) chunk_size = 1;
  const u64 num_chunks = total == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(static_cast<std::size_t>(num_chunks));
  if (num_chunks == 0) return partials;
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<u64>(threads, num_chunks));

  if (threads <= 1) {
    for (u64 c = 0; c < num_chunks; ++c) {
      const u64 begin = c * chunk_size;
      partials[static_cast<std::size_t>(c)] = fn(begin, std::min(total, begin + chunk_size));
    }
    return partials;
  }

  std::atomic<u64> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const u64 c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= num_chunks) return;
        const u64 begin = c * chunk_size;
        partials[static_cast<std::size_t>(c)] = fn(begin, std::min(total, begin + chunk_size));
      }
    });
  }
  for (auto& th : pool) th.join();
  return partials;
}

}  // namespace axswap
