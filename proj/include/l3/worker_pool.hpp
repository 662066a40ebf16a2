#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace l3 {

/// Fixed set of threads that drain index ranges handed to parallel_for.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const noexcept { return threads_.size(); }

  /// Calls fn(i) for every i in [0, count) on the pool threads and blocks
  /// until all calls returned. Calls are unordered. Concurrent callers are
  /// serialized. fn must not throw.
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

 private:
  void worker_loop(std::stop_token stop);

  std::mutex submit_mutex_;
  std::mutex mutex_;
  std::condition_variable_any wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t count_ = 0;
  std::size_t next_ = 0;
  std::size_t finished_ = 0;
  std::size_t generation_ = 0;
  std::vector<std::jthread> threads_;
};

/// Worker count from the L3_WORKERS environment variable, falling back to
/// the hardware concurrency (at least 1).
std::size_t default_worker_count();

}  // namespace l3
