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

#include <unistd.h>

#include <algorithm>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

namespace hamming::bench {

// Current resident set size of this process, from /proc/self/statm.
inline std::optional<std::uint64_t> read_resident_bytes() {
  std::ifstream statm("/proc/self/statm");
  std::uint64_t size_pages = 0, resident_pages = 0;
  if (!(statm >> size_pages >> resident_pages)) return std::nullopt;
  const long page = ::sysconf(_SC_PAGESIZE);
  if (page <= 0) return std::nullopt;
  return resident_pages * static_cast<std::uint64_t>(page);
}

// Background observer sampling resident bytes every `period` and keeping the
// peak. One statm read per 100 ms is far below 1% of a core.
class ResidentSampler {
 public:
  explicit ResidentSampler(std::chrono::milliseconds period = std::chrono::milliseconds(100))
      : period_(period) {
    available_ = read_resident_bytes().has_value();
    if (!available_) return;
    sample();
    thread_ = std::thread([this] {
      std::unique_lock lock(mu_);
      while (!cv_.wait_for(lock, period_, [this] { return stop_; })) {
        lock.unlock();
        sample();
        lock.lock();
      }
    });
  }

  ResidentSampler(const ResidentSampler&) = delete;
  ResidentSampler& operator=(const ResidentSampler&) = delete;

  ~ResidentSampler() { stop(); }

  // Stops sampling after one final reading; idempotent.
  void stop() {
    if (!thread_.joinable()) return;
    {
      std::lock_guard lock(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    thread_.join();
    sample();
  }

  bool available() const noexcept { return available_; }

  // Takes an immediate reading in addition to the periodic ones.
  void sample() {
    if (auto rss = read_resident_bytes()) {
      std::uint64_t prev = peak_.load();
      while (*rss > prev && !peak_.compare_exchange_weak(prev, *rss)) {
      }
      samples_.fetch_add(1);
      std::lock_guard lock(phase_mu_);
      auto& p = phase_peaks_[phase_];
      p = std::max(p, *rss);
    }
  }

  // Readings are also attributed to the current phase so interleaved
  // workloads can report one peak each.
  void set_phase(std::size_t phase) {
    std::lock_guard lock(phase_mu_);
    phase_ = phase;
  }

  std::optional<std::uint64_t> peak() const {
    if (!available_) return std::nullopt;
    return peak_.load();
  }

  std::optional<std::uint64_t> phase_peak(std::size_t phase) const {
    std::lock_guard lock(phase_mu_);
    auto it = phase_peaks_.find(phase);
    if (!available_ || it == phase_peaks_.end()) return std::nullopt;
    return it->second;
  }

  std::uint64_t sample_count() const noexcept { return samples_.load(); }

 private:
  std::chrono::milliseconds period_;
  bool available_ = false;
  std::atomic<std::uint64_t> peak_{0};
  std::atomic<std::uint64_t> samples_{0};
  mutable std::mutex phase_mu_;
  std::size_t phase_ = 0;
  std::map<std::size_t, std::uint64_t> phase_peaks_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stop_ = false;
  std::thread thread_;
};

}  // namespace hamming::bench
