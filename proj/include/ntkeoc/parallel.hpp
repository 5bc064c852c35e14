#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ntkeoc {

/// Worker count: NTK_EOC_THREADS env var when set, hardware concurrency
/// otherwise, at least 1.
inline int thread_count() {
  if (const char* env = std::getenv("NTK_EOC_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(0..num_tasks-1), possibly in parallel. Each task must write only
/// its own output slot; callers combine slots in index order afterwards, so
/// results are bit-identical for every worker count.
inline void parallel_for(int num_tasks, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_count(), num_tasks);
  if (workers <= 1) {
    for (int i = 0; i < num_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= num_tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ntkeoc
