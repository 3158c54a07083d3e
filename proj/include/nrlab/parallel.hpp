#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace nrlab {

// Deterministic helper for embarrassingly parallel index loops: fn(i) must
// write only to slot i of preallocated storage. Chunks are claimed from an
// atomic counter, so the schedule varies with the worker count but the
// result layout never does; callers then reduce in index order.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  constexpr std::size_t chunk = 64;
  auto body = [&] {
    for (;;) {
      std::size_t lo = next.fetch_add(chunk);
      if (lo >= n) return;
      std::size_t hi = std::min(n, lo + chunk);
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
}

}  // namespace nrlab
