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

#include "hamming/dataset.hpp"
#include "hamming/query.hpp"

namespace hamming {

// Reference answer for a radius query: every code is compared, one at a time,
// on the calling thread. Trusted ground truth for both backends.
inline NeighborSet range_search_oracle(const CodeDataset& dataset, const QuerySpec& spec) {
  spec.validate(dataset.width_bits());
  NeighborSet out;
  for (std::size_t id = 0; id < dataset.count(); ++id) {
    const auto d = hamming_distance(dataset.code_words(static_cast<DocId>(id)), spec.query.words());
    if (d <= spec.radius) out.add(static_cast<DocId>(id), d);
  }
  return out;
}

}  // namespace hamming
