#include "parhyb/parallel.hpp"

#include <exception>

namespace parhyb {

WorkerPool::WorkerPool(int workers) : workers_(workers) {
  if (workers < 1) throw InvalidParams("WorkerPool: workers must be >= 1");
  threads_.reserve(static_cast<std::size_t>(workers_ - 1));
  for (int i = 1; i < workers_; ++i) {
    threads_.emplace_back([this] { worker_loop(); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lk(mu_);
    stop_ = true;
  }
  cv_work_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::worker_loop() {
  std::uint64_t seen = 0;
  for (;;) {
    const std::function<void(std::size_t)>* fn = nullptr;
    std::size_t count = 0;
    {
      std::unique_lock<std::mutex> lk(mu_);
      cv_work_.wait(lk, [&] { return stop_ || batch_ != seen; });
      if (stop_) return;
      seen = batch_;
      fn = fn_;
      count = count_;
    }
    for (;;) {
      const std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      (*fn)(i);
    }
    {
      std::lock_guard<std::mutex> lk(mu_);
      if (--active_ == 0) cv_done_.notify_one();
    }
  }
}

void WorkerPool::run_indexed(std::size_t count,
                             const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (threads_.empty()) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lk(mu_);
    fn_ = &fn;
    count_ = count;
    next_.store(0, std::memory_order_relaxed);
    active_ = static_cast<int>(threads_.size());
    ++batch_;
  }
  cv_work_.notify_all();
  for (;;) {  // the caller is one of the workers
    const std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
    if (i >= count) break;
    fn(i);
  }
  std::unique_lock<std::mutex> lk(mu_);
  cv_done_.wait(lk, [&] { return active_ == 0; });
  fn_ = nullptr;
}

std::vector<Vector> par_map(WorkerPool& pool, std::size_t count,
                            const std::function<Vector(std::size_t)>& task) {
  std::vector<Vector> results(count);
  std::vector<std::exception_ptr> errors(count);
  pool.run_indexed(count, [&](std::size_t i) {
    try {
      results[i] = task(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
  return results;
}

std::pair<std::size_t, Vector> argmax_distance(
    const std::vector<Vector>& results, const Vector& x) {
  if (results.empty()) {
    throw InvalidParams("argmax_distance: empty result list");
  }
  std::size_t best = 0;
  double best_d = distance(results[0], x);
  for (std::size_t i = 1; i < results.size(); ++i) {
    const double d = distance(results[i], x);
    if (d > best_d) {  // strict, so ties keep the lowest index
      best_d = d;
      best = i;
    }
  }
  return {best, results[best]};
}

}  // namespace parhyb
