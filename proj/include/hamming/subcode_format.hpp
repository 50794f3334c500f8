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

#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>

#include "hamming/binary_code.hpp"
#include "hamming/errors.hpp"
#include "hamming/io.hpp"

// On-disk layout of a sub-code index directory. All integers little-endian.
//
//   manifest       magic "HSI1", u32 version, u32 width_bits, u32 sub_width,
//                  u32 shard_count, u32 dataset_count            (24 bytes)
//   shard-k.fwd    raw codes in local-id order, dataset body packing
//   shard-k.trm    fixed 26-byte term records sorted by (position, value):
//                  u16 position, u64 value, u64 postings_offset,
//                  u32 postings_len_bytes, u32 doc_freq
//   shard-k.pst    concatenated delta + varint postings lists
//   shard-k.tix    sparse term index: magic "HTX1", u32 version,
//                  u32 interval, u32 sample_count, u64 record_count, then
//                  sample_count keys (u16 position, u64 value) taken from
//                  every interval-th term record
//   COMPLETE       empty marker, written last
namespace hamming::subcode_format {

inline constexpr std::array<char, 4> kManifestMagic = {'H', 'S', 'I', '1'};
inline constexpr std::array<char, 4> kTermIndexMagic = {'H', 'T', 'X', '1'};
inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::size_t kManifestBytes = 24;
inline constexpr std::size_t kTermRecordBytes = 26;
inline constexpr std::size_t kTermIndexHeaderBytes = 24;
inline constexpr std::size_t kTermKeyBytes = 10;

inline constexpr const char* kManifestFile = "manifest";
inline constexpr const char* kCompleteFile = "COMPLETE";

inline std::string shard_file(std::size_t shard, const char* ext) {
  return "shard-" + std::to_string(shard) + "." + ext;
}

struct TermKey {
  std::uint16_t position = 0;
  std::uint64_t value = 0;

  friend bool operator==(const TermKey&, const TermKey&) = default;
  friend auto operator<=>(const TermKey&, const TermKey&) = default;
};

struct TermRecord {
  TermKey key;
  std::uint64_t postings_offset = 0;
  std::uint32_t postings_len_bytes = 0;
  std::uint32_t doc_freq = 0;

  friend bool operator==(const TermRecord&, const TermRecord&) = default;
};

inline void encode_key(const TermKey& k, std::byte* p) {
  io::store_le<std::uint16_t>(p, k.position);
  io::store_le<std::uint64_t>(p + 2, k.value);
}

inline TermKey decode_key(const std::byte* p) {
  return {io::load_le<std::uint16_t>(p), io::load_le<std::uint64_t>(p + 2)};
}

inline void encode_record(const TermRecord& r, std::byte* p) {
  encode_key(r.key, p);
  io::store_le<std::uint64_t>(p + 10, r.postings_offset);
  io::store_le<std::uint32_t>(p + 18, r.postings_len_bytes);
  io::store_le<std::uint32_t>(p + 22, r.doc_freq);
}

inline TermRecord decode_record(const std::byte* p) {
  TermRecord r;
  r.key = decode_key(p);
  r.postings_offset = io::load_le<std::uint64_t>(p + 10);
  r.postings_len_bytes = io::load_le<std::uint32_t>(p + 18);
  r.doc_freq = io::load_le<std::uint32_t>(p + 22);
  return r;
}

struct ManifestHeader {
  std::uint32_t width_bits = 0;
  std::uint32_t sub_width = 0;
  std::uint32_t shard_count = 0;
  std::uint32_t dataset_count = 0;

  friend bool operator==(const ManifestHeader&, const ManifestHeader&) = default;
};

inline std::array<std::byte, kManifestBytes> encode_manifest(const ManifestHeader& m) {
  std::array<std::byte, kManifestBytes> out{};
  std::memcpy(out.data(), kManifestMagic.data(), 4);
  io::store_le<std::uint32_t>(out.data() + 4, kVersion);
  io::store_le<std::uint32_t>(out.data() + 8, m.width_bits);
  io::store_le<std::uint32_t>(out.data() + 12, m.sub_width);
  io::store_le<std::uint32_t>(out.data() + 16, m.shard_count);
  io::store_le<std::uint32_t>(out.data() + 20, m.dataset_count);
  return out;
}

// Round-robin placement: DocId j lives in shard j % K at local id j / K.
inline std::uint32_t shard_doc_count(std::uint32_t dataset_count, std::uint32_t shard_count,
                                     std::uint32_t shard) {
  return dataset_count / shard_count + (shard < dataset_count % shard_count ? 1u : 0u);
}

}  // namespace hamming::subcode_format
