#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace prestige {

// Runs fn(begin, end) over [0, n) split into contiguous chunks, one per
// worker. Callers must only write to slots owned by their chunk; with that
// contract the result does not depend on the worker count.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || n < 2 * static_cast<std::size_t>(threads)) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  const std::size_t step = (n + threads - 1) / threads;
  for (unsigned t = 1; t < threads; ++t) {
    const std::size_t b = std::min(n, t * step);
    const std::size_t e = std::min(n, b + step);
    if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(n, step));
}

// Runs fn(w) for every worker id w in [0, workers), one thread each.
template <class Fn>
void parallel_workers(unsigned workers, Fn&& fn) {
  workers = std::max(1u, workers);
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back([&fn, w] { fn(w); });
  fn(0u);
}

// Worker cap from PRESTIGE_RANK_THREADS, falling back to the hardware count.
inline unsigned thread_count_from_env() {
  if (const char* s = std::getenv("PRESTIGE_RANK_THREADS")) {
    try {
      const long v = std::stol(s);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace prestige
