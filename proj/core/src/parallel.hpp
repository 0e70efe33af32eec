// Internal: index-range fan-out over a fixed pool of std::threads.

#ifndef J2KIT_SRC_PARALLEL_HPP
#define J2KIT_SRC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <optional>
#include <thread>
#include <vector>

namespace j2kit::detail {

inline unsigned worker_count(std::size_t n) {
  unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  if (n < 256) return 1;
  return static_cast<unsigned>(std::min<std::size_t>(hw, n / 128));
}

/// Smallest i in [0, n) with pred(i, scratch) true.  Each worker gets its own
/// default-constructed Scratch.  Workers stop early once a smaller hit exists.
template <class Scratch, class Pred>
std::optional<std::size_t> find_first(std::size_t n, Pred pred) {
  const unsigned k = worker_count(n);
  if (k <= 1) {
    Scratch scratch{};
    for (std::size_t i = 0; i < n; ++i) {
      if (pred(i, scratch)) return i;
    }
    return std::nullopt;
  }
  std::atomic<std::size_t> best{n};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < k; ++t) {
    pool.emplace_back([&, t] {
      Scratch scratch{};
      // Strided so that every worker reaches low indices early.
      for (std::size_t i = t; i < n; i += k) {
        if (i >= best.load(std::memory_order_relaxed)) return;
        if (pred(i, scratch)) {
          std::size_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (best.load() == n) return std::nullopt;
  return best.load();
}

/// Runs body(i, scratch) for every i in [0, n).
template <class Scratch, class Body>
void for_all(std::size_t n, Body body) {
  const unsigned k = worker_count(n);
  if (k <= 1) {
    Scratch scratch{};
    for (std::size_t i = 0; i < n; ++i) body(i, scratch);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < k; ++t) {
    pool.emplace_back([&, t] {
      Scratch scratch{};
      for (std::size_t i = t; i < n; i += k) body(i, scratch);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace j2kit::detail

#endif  // J2KIT_SRC_PARALLEL_HPP
