#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace lanetopo {

/// Runs fn(i) for i in [0, n). Results must be written to per-index slots by
/// the caller, which keeps the outcome independent of scheduling. If any
/// invocation throws, the exception from the lowest index is rethrown.
template <class F>
void parallel_for(int n, int jobs, F&& fn) {
  if (n <= 0) return;
  if (jobs <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  int workers = jobs < n ? jobs : n;
  std::atomic<int> next{0};
  std::vector<std::pair<int, std::exception_ptr>> errors(workers, {-1, nullptr});
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          if (errors[w].second == nullptr || i < errors[w].first)
            errors[w] = {i, std::current_exception()};
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::exception_ptr first;
  int first_index = -1;
  for (const auto& [idx, err] : errors) {
    if (err && (first_index < 0 || idx < first_index)) {
      first_index = idx;
      first = err;
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace lanetopo
