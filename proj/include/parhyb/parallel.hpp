#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "parhyb/core.hpp"

namespace parhyb {

// Fixed-size pool used for the per-phase fan-out. The caller thread counts
// as one worker and takes part in every batch, so `workers` is the total
// number of threads chewing tasks; workers == 1 runs inline (sequential
// mode). Each index is evaluated by exactly one task, so results are
// identical no matter how indices land on threads.
class WorkerPool {
 public:
  explicit WorkerPool(int workers = 1);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int workers() const { return workers_; }

  // Invokes fn(i) for each i in [0, count); returns after all calls finish.
  // fn must not throw (wrap tasks that can).
  void run_indexed(std::size_t count,
                   const std::function<void(std::size_t)>& fn);

 private:
  void worker_loop();

  int workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_work_;
  std::condition_variable cv_done_;
  const std::function<void(std::size_t)>* fn_ = nullptr;
  std::size_t count_ = 0;
  std::atomic<std::size_t> next_{0};
  int active_ = 0;
  std::uint64_t batch_ = 0;
  bool stop_ = false;
};

// Evaluates `count` independent tasks and returns their results ordered by
// index. Output is identical to sequential evaluation for any worker count.
// If several tasks fail, the lowest-indexed failure is rethrown.
std::vector<Vector> par_map(WorkerPool& pool, std::size_t count,
                            const std::function<Vector(std::size_t)>& task);

// Lowest index attaining max ||results[i] - x||, and that element.
std::pair<std::size_t, Vector> argmax_distance(
    const std::vector<Vector>& results, const Vector& x);

}  // namespace parhyb
