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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hamming/errors.hpp"

namespace hamming::varint {

// LEB128: 7 value bits per byte, high bit set on every byte but the last.
inline void put(std::vector<std::byte>& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::byte>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::byte>(v));
}

// Decodes one value starting at `pos`, advancing it. Returns false on a
// truncated or over-long encoding.
inline bool get(std::span<const std::byte> in, std::size_t& pos, std::uint64_t& v) {
  v = 0;
  for (unsigned shift = 0; shift < 64; shift += 7) {
    if (pos >= in.size()) return false;
    const auto b = std::to_integer<std::uint64_t>(in[pos++]);
    v |= (b & 0x7f) << shift;
    if ((b & 0x80) == 0) return true;
  }
  return false;
}

// Postings list: first id verbatim, then gaps to the previous id (each >= 1).
inline void encode_postings(std::span<const std::uint32_t> ids, std::vector<std::byte>& out) {
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    put(out, i == 0 ? ids[i] : ids[i] - prev);
    prev = ids[i];
  }
}

// Appends the decoded ids to `out`. Throws on malformed input: bad varints,
// zero gaps, 32-bit overflow, or a count different from `doc_freq`.
inline void decode_postings(std::span<const std::byte> in, std::uint32_t doc_freq,
                            std::vector<std::uint32_t>& out) {
  const std::size_t base = out.size();
  out.resize(base + doc_freq);
  std::uint32_t* dst = out.data() + base;
  const auto* p = reinterpret_cast<const std::uint8_t*>(in.data());
  const auto* end = p + in.size();
  std::uint64_t prev = 0;
  for (std::uint32_t i = 0; i < doc_freq; ++i) {
    std::uint64_t v = 0;
    unsigned shift = 0;
    for (;;) {
      if (p == end || shift >= 64) throw QueryError("malformed postings list");
      const std::uint8_t b = *p++;
      v |= std::uint64_t{b & 0x7fu} << shift;
      if ((b & 0x80u) == 0) break;
      shift += 7;
    }
    if (i > 0 && v == 0) throw QueryError("postings list not strictly increasing");
    const std::uint64_t id = i == 0 ? v : prev + v;
    if (id > UINT32_MAX) throw QueryError("postings id overflow");
    dst[i] = static_cast<std::uint32_t>(id);
    prev = id;
  }
  if (p != end) throw QueryError("postings length disagrees with document frequency");
}

}  // namespace hamming::varint
