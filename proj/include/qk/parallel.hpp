#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <limits>
#include <thread>
#include <vector>

namespace qk::detail {

/// Runs task(0..count-1) on up to `workers` threads and returns the smallest
/// index whose task reported success (count if none). Tasks beyond the best
/// index found so far are skipped, so the answer matches a sequential scan.
template <class Task>
std::size_t first_success(std::size_t count, unsigned workers, Task&& task) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      if (task(i)) return i;
    return count;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best{count};
  auto run = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || i >= best.load()) return;
      if (task(i)) {
        std::size_t cur = best.load();
        while (i < cur && !best.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned spawned = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  for (unsigned w = 0; w + 1 < spawned; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  return best.load();
}

}  // namespace qk::detail
