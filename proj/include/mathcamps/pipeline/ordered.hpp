#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace mathcamps {

/// Runs `task(i)` for i in [0, n) on `jobs` threads and passes results to
/// `emit` in index order, one call at a time.
template <typename R>
void run_ordered(std::size_t n, std::size_t jobs, const std::function<R(std::size_t)>& task,
                 const std::function<void(std::size_t, R&)>& emit) {
  std::vector<std::optional<R>> results(n);
  std::size_t next_emit = 0;
  std::mutex m;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      R r = task(i);
      std::lock_guard lock(m);
      results[i] = std::move(r);
      while (next_emit < n && results[next_emit]) {
        emit(next_emit, *results[next_emit]);
        results[next_emit].reset();
        ++next_emit;
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace mathcamps
