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

#include <chrono>
#include <cstdint>
#include <memory>
#include <new>
#include <vector>

#include "hamming/dataset.hpp"
#include "hamming/query.hpp"
#include "hamming/worker_pool.hpp"

namespace hamming {

inline constexpr std::size_t kDefaultFlatWorkers = 5;

// Main-memory index: every code packed back to back in one word buffer and
// scanned in full by a fixed pool of workers on each query.
class FlatIndex {
 public:
  FlatIndex(FlatIndex&&) noexcept = default;
  FlatIndex& operator=(FlatIndex&&) noexcept = default;

  // Copies the dataset into a fresh contiguous buffer in one pass.
  static FlatIndex build(const CodeDataset& dataset, std::size_t workers = kDefaultFlatWorkers) {
    if (workers == 0) throw UsageError("flat index needs at least one worker");
    const auto start = std::chrono::steady_clock::now();
    FlatIndex index(dataset.width_bits(), workers);
    const auto src = dataset.words();
    try {
      index.buffer_.assign(src.begin(), src.end());
    } catch (const std::bad_alloc&) {
      throw ResourceError("flat index buffer allocation failed", src.size_bytes());
    }
    index.count_ = dataset.count();
    index.build_seconds_ =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return index;
  }

  std::uint32_t width_bits() const noexcept { return width_bits_; }
  std::size_t count() const noexcept { return count_; }
  std::size_t workers() const noexcept { return pool_->size(); }
  std::size_t words_per_code() const noexcept { return width_bits_ / kWordBits; }
  double build_seconds() const noexcept { return build_seconds_; }
  std::size_t buffer_bytes() const noexcept { return buffer_.size() * sizeof(Word); }

  std::span<const Word> code_words(DocId id) const {
    return std::span<const Word>(buffer_).subspan(std::size_t{id} * words_per_code(),
                                                  words_per_code());
  }

  // Full scan split into `workers` contiguous id ranges; each range collects
  // hits locally and the pieces are concatenated in range order.
  NeighborSet range_search(const QuerySpec& spec) const {
    spec.validate(width_bits_);
    const std::size_t lanes = std::min(pool_->size(), std::max<std::size_t>(count_, 1));
    std::vector<std::vector<Neighbor>> partial(lanes);
    const Word* q = spec.query.words().data();
    const std::size_t wpc = words_per_code();
    const std::uint32_t radius = spec.radius;

    pool_->run(lanes, [&](std::size_t lane) {
      const std::size_t begin = count_ * lane / lanes;
      const std::size_t end = count_ * (lane + 1) / lanes;
      auto& hits = partial[lane];
      const Word* code = buffer_.data() + begin * wpc;
      if (wpc == 1) {
        const Word qw = q[0];
        for (std::size_t id = begin; id < end; ++id, ++code) {
          const auto d = static_cast<std::uint32_t>(std::popcount(*code ^ qw));
          if (d <= radius) hits.push_back({static_cast<DocId>(id), d});
        }
      } else {
        for (std::size_t id = begin; id < end; ++id, code += wpc) {
          const auto d = hamming_words(code, q, wpc);
          if (d <= radius) hits.push_back({static_cast<DocId>(id), d});
        }
      }
    });

    std::size_t total = 0;
    for (const auto& p : partial) total += p.size();
    std::vector<Neighbor> merged;
    merged.reserve(total);
    for (const auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
    return NeighborSet(std::move(merged));
  }

 private:
  FlatIndex(std::uint32_t width_bits, std::size_t workers)
      : width_bits_(width_bits), pool_(std::make_unique<WorkerPool>(workers)) {}

  std::uint32_t width_bits_ = 0;
  std::size_t count_ = 0;
  std::vector<Word> buffer_;
  std::unique_ptr<WorkerPool> pool_;
  double build_seconds_ = 0.0;
};

inline FlatIndex flat_build(const CodeDataset& dataset, std::size_t workers = kDefaultFlatWorkers) {
  return FlatIndex::build(dataset, workers);
}

inline NeighborSet flat_range_search(const FlatIndex& index, const QuerySpec& spec) {
  return index.range_search(spec);
}

}  // namespace hamming
