#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace nht {

// Worker count: NHT_THREADS caps parallelism; absent -> hardware default.
inline int worker_count() {
  if (const char* env = std::getenv("NHT_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic parallel map-reduce over [0, n): the index range is split into
// fixed chunks independent of the worker count, each chunk reduces locally in
// index order, and chunk results combine sequentially in chunk order.  With a
// counter-based RNG keyed by index this makes results bitwise identical for
// any NHT_THREADS.
//
// ChunkFn: (size_t begin, size_t end) -> Acc;  Combine: (Acc&, const Acc&).
template <class Acc, class ChunkFn, class Combine>
Acc chunked_reduce(size_t n, Acc init, const ChunkFn& chunk_fn, const Combine& combine) {
  if (n == 0) return init;
  const size_t chunk = 4096;
  size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<Acc> partial(n_chunks, init);
  int workers = worker_count();
  if (workers <= 1 || n_chunks == 1) {
    for (size_t c = 0; c < n_chunks; ++c)
      partial[c] = chunk_fn(c * chunk, std::min(n, (c + 1) * chunk));
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
          partial[c] = chunk_fn(c * chunk, std::min(n, (c + 1) * chunk));
      });
    }
    for (auto& th : pool) th.join();
  }
  Acc acc = init;
  for (const auto& p : partial) combine(acc, p);
  return acc;
}

}  // namespace nht
