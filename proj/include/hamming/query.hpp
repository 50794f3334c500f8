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

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "hamming/binary_code.hpp"

namespace hamming {

using DocId = std::uint32_t;

// A radius query: every code within `radius` bit flips of `query`.
struct QuerySpec {
  BinaryCode query;
  std::uint32_t radius = 0;

  // Throws InputError unless the query matches `width_bits` and the radius
  // lies in [0, width_bits].
  void validate(std::uint32_t width_bits) const {
    if (query.width_bits() != width_bits) {
      throw InputError("query width " + std::to_string(query.width_bits()) +
                       " does not match index width " + std::to_string(width_bits));
    }
    if (radius > width_bits) {
      throw InputError("radius " + std::to_string(radius) + " exceeds code width " +
                       std::to_string(width_bits));
    }
  }
};

struct Neighbor {
  DocId id = 0;
  std::uint32_t distance = 0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
  friend auto operator<=>(const Neighbor&, const Neighbor&) = default;
};

// Result of a radius query. Entries carry no particular order; call
// sort_by_id() before comparing or printing.
class NeighborSet {
 public:
  NeighborSet() = default;
  explicit NeighborSet(std::vector<Neighbor> entries) : entries_(std::move(entries)) {}

  const std::vector<Neighbor>& entries() const& noexcept { return entries_; }
  std::vector<Neighbor>& entries() & noexcept { return entries_; }
  // By value on temporaries, so `for (auto& n : search(...).entries())` is safe.
  std::vector<Neighbor> entries() && noexcept { return std::move(entries_); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  void add(DocId id, std::uint32_t distance) { entries_.push_back({id, distance}); }

  NeighborSet& sort_by_id() {
    std::sort(entries_.begin(), entries_.end());
    return *this;
  }

  NeighborSet sorted() const {
    NeighborSet copy = *this;
    copy.sort_by_id();
    return copy;
  }

  bool contains(DocId id) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [id](const Neighbor& n) { return n.id == id; });
  }

  // Set equality over (id, distance) pairs, ignoring order.
  friend bool same_set(const NeighborSet& a, const NeighborSet& b) {
    return a.size() == b.size() && a.sorted().entries_ == b.sorted().entries_;
  }

 private:
  std::vector<Neighbor> entries_;
};

// Ids present in exactly one of the two sets (by id only), ascending.
inline std::vector<DocId> symmetric_difference_ids(const NeighborSet& a, const NeighborSet& b) {
  std::vector<DocId> ia, ib, out;
  for (const auto& n : a.entries()) ia.push_back(n.id);
  for (const auto& n : b.entries()) ib.push_back(n.id);
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  std::set_symmetric_difference(ia.begin(), ia.end(), ib.begin(), ib.end(),
                                std::back_inserter(out));
  return out;
}

}  // namespace hamming
