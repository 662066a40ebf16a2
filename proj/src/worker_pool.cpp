#include "l3/worker_pool.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace l3 {

WorkerPool::WorkerPool(std::size_t workers) {
  workers = std::max<std::size_t>(1, workers);
  threads_.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i)
    threads_.emplace_back([this](std::stop_token st) { worker_loop(st); });
}

WorkerPool::~WorkerPool() {
  for (auto& t : threads_) t.request_stop();
  {
    std::lock_guard lk(mutex_);
  }
  wake_.notify_all();
}

void WorkerPool::worker_loop(std::stop_token stop) {
  std::size_t seen = 0;
  std::unique_lock lk(mutex_);
  while (true) {
    if (!wake_.wait(lk, stop, [&] { return generation_ != seen; })) return;
    seen = generation_;
    while (next_ < count_) {
      const std::size_t i = next_++;
      const auto* task = task_;
      lk.unlock();
      (*task)(i);
      lk.lock();
      if (++finished_ == count_) done_.notify_all();
    }
  }
}

void WorkerPool::parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::lock_guard submit(submit_mutex_);
  std::unique_lock lk(mutex_);
  task_ = &fn;
  count_ = count;
  next_ = 0;
  finished_ = 0;
  ++generation_;
  wake_.notify_all();
  done_.wait(lk, [&] { return finished_ == count_; });
  task_ = nullptr;
  count_ = 0;
  next_ = 0;
}

std::size_t default_worker_count() {
  if (const char* env = std::getenv("L3_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace l3
