#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace lsl {

/// Worker count, controlled by the LSL_THREADS environment variable.
/// Defaults to one so results are reproducible unless opted in.
inline int threadCount() {
  if (const char* env = std::getenv("LSL_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

/// Runs fn(i) for i in [0, n), split into contiguous blocks per worker.
/// Callers keep determinism by writing results into index addressed
/// buffers and reducing serially afterwards.
template <typename Fn>
void parallelFor(std::size_t n, Fn&& fn) {
  const std::size_t workers = static_cast<std::size_t>(threadCount());
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t used = std::min(workers, n);
  const std::size_t block = (n + used - 1) / used;
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (std::size_t w = 0; w < used; ++w) {
    const std::size_t lo = w * block;
    const std::size_t hi = std::min(n, lo + block);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace lsl
