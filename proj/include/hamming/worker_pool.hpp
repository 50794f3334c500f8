// Copyright 2026 The hamming-search Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <exception>
#include <functional>
#include <latch>
#include <mutex>
#include <thread>
#include <vector>

#include "hamming/errors.hpp"

namespace hamming {

// Fixed set of worker threads shared by every query against one index.
// run() fans `tasks` closures out to the workers and blocks until all finish;
// concurrent callers simply interleave in the queue.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t threads) {
    if (threads == 0) throw UsageError("WorkerPool needs at least one thread");
    workers_.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) {
      workers_.emplace_back([this] { loop(); });
    }
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() {
    {
      std::lock_guard lock(mu_);
      stopping_ = true;
    }
    cv_.notify_all();
    for (auto& w : workers_) w.join();
  }

  std::size_t size() const noexcept { return workers_.size(); }

  // Runs fn(i) for i in [0, tasks). Rethrows the first exception raised.
  void run(std::size_t tasks, const std::function<void(std::size_t)>& fn) {
    if (tasks == 0) return;
    if (tasks == 1) {
      fn(0);
      return;
    }
    std::latch done(static_cast<std::ptrdiff_t>(tasks));
    std::exception_ptr error;
    std::mutex error_mu;
    {
      std::lock_guard lock(mu_);
      for (std::size_t i = 0; i < tasks; ++i) {
        queue_.emplace_back([&, i] {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard g(error_mu);
            if (!error) error = std::current_exception();
          }
          done.count_down();
        });
      }
    }
    cv_.notify_all();
    done.wait();
    if (error) std::rethrow_exception(error);
  }

 private:
  void loop() {
    for (;;) {
      std::function<void()> job;
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
        if (queue_.empty()) return;
        job = std::move(queue_.front());
        queue_.pop_front();
      }
      job();
    }
  }

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace hamming
