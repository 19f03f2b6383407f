#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace repgraph {

// Fixed shard count decoupled from the thread count: work item i belongs to
// shard i % kShards, shard results are merged in shard order, so numeric
// output does not depend on how many threads ran.
inline constexpr size_t kShards = 64;

inline void run_sharded(size_t n_shards, unsigned n_threads,
                        const std::function<void(size_t)>& shard_fn) {
  if (n_threads <= 1) {
    for (size_t s = 0; s < n_shards; ++s) shard_fn(s);
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t s = next.fetch_add(1);
      if (s >= n_shards) return;
      shard_fn(s);
    }
  };
  std::vector<std::thread> threads;
  unsigned n = std::min<unsigned>(n_threads, static_cast<unsigned>(n_shards));
  threads.reserve(n);
  for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

}  // namespace repgraph
