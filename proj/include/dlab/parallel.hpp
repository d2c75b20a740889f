#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace dlab {

// Runs fn(i) for i in [0, n) on a fixed pool of threads. Work items must be
// independent; callers write results into per-item slots and reduce them
// afterwards in index order, which keeps aggregates independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
}

}  // namespace dlab
