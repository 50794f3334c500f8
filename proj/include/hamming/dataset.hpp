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
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hamming/binary_code.hpp"
#include "hamming/errors.hpp"
#include "hamming/io.hpp"
#include "hamming/query.hpp"

namespace hamming {

// Ordered collection of equal-width codes. Code j has DocId j and occupies
// words [j*W, (j+1)*W) of one contiguous buffer, W = width_bits / 64.
class CodeDataset {
 public:
  CodeDataset() = default;

  explicit CodeDataset(std::uint32_t width_bits)
      : width_bits_(BinaryCode::checked_width(width_bits)) {}

  CodeDataset(std::uint32_t width_bits, std::vector<Word> words)
      : width_bits_(BinaryCode::checked_width(width_bits)), words_(std::move(words)) {
    if (words_.size() % words_per_code() != 0) {
      throw UsageError("CodeDataset: buffer is not a whole number of codes");
    }
  }

  std::uint32_t width_bits() const noexcept { return width_bits_; }
  std::size_t words_per_code() const noexcept { return width_bits_ / kWordBits; }
  std::size_t bytes_per_code() const noexcept { return width_bits_ / 8; }
  std::size_t count() const noexcept {
    return width_bits_ == 0 ? 0 : words_.size() / words_per_code();
  }
  bool empty() const noexcept { return words_.empty(); }

  std::span<const Word> code_words(DocId id) const {
    if (id >= count()) {
      throw UsageError("DocId " + std::to_string(id) + " out of range (count " +
                       std::to_string(count()) + ")");
    }
    return std::span<const Word>(words_).subspan(id * words_per_code(), words_per_code());
  }

  BinaryCode code(DocId id) const { return BinaryCode(width_bits_, code_words(id)); }

  void push_back(const BinaryCode& code) {
    if (code.width_bits() != width_bits_) {
      throw InputError("code width " + std::to_string(code.width_bits()) +
                       " does not match dataset width " + std::to_string(width_bits_));
    }
    words_.insert(words_.end(), code.words().begin(), code.words().end());
  }

  void reserve(std::size_t codes) { words_.reserve(codes * words_per_code()); }

  std::span<const Word> words() const noexcept { return words_; }

  friend bool operator==(const CodeDataset&, const CodeDataset&) = default;

 private:
  std::uint32_t width_bits_ = 64;
  std::vector<Word> words_;
};

namespace dataset_format {

inline constexpr std::array<char, 4> kMagic = {'H', 'D', 'S', '1'};
inline constexpr std::uint32_t kVersion = 1;
inline constexpr std::size_t kHeaderBytes = 16;

}  // namespace dataset_format

// Serializes words little-endian regardless of host byte order.
inline void encode_words_le(std::span<const Word> words, std::byte* out) {
  if constexpr (std::endian::native == std::endian::little) {
    if (!words.empty()) std::memcpy(out, words.data(), words.size_bytes());
  } else {
    for (std::size_t i = 0; i < words.size(); ++i) io::store_le<Word>(out + 8 * i, words[i]);
  }
}

inline void decode_words_le(const std::byte* in, std::span<Word> words) {
  if constexpr (std::endian::native == std::endian::little) {
    if (!words.empty()) std::memcpy(words.data(), in, words.size_bytes());
  } else {
    for (std::size_t i = 0; i < words.size(); ++i) words[i] = io::load_le<Word>(in + 8 * i);
  }
}

inline void dataset_write(const CodeDataset& dataset, std::ostream& out) {
  if (dataset.count() > UINT32_MAX) throw InputError("dataset too large for the file format");
  std::array<std::byte, dataset_format::kHeaderBytes> header{};
  std::memcpy(header.data(), dataset_format::kMagic.data(), 4);
  io::store_le<std::uint32_t>(header.data() + 4, dataset_format::kVersion);
  io::store_le<std::uint32_t>(header.data() + 8, dataset.width_bits());
  io::store_le<std::uint32_t>(header.data() + 12, static_cast<std::uint32_t>(dataset.count()));
  out.write(reinterpret_cast<const char*>(header.data()), header.size());

  constexpr std::size_t kChunkWords = 1 << 16;
  std::vector<std::byte> buf;
  const auto words = dataset.words();
  for (std::size_t i = 0; i < words.size(); i += kChunkWords) {
    const auto chunk = words.subspan(i, std::min(kChunkWords, words.size() - i));
    buf.resize(chunk.size_bytes());
    encode_words_le(chunk, buf.data());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw FormatError(FormatErrc::io, "write failed");
}

inline CodeDataset dataset_read(std::istream& in) {
  std::array<std::byte, dataset_format::kHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() != static_cast<std::streamsize>(header.size())) {
    throw FormatError(FormatErrc::truncated, "header shorter than 16 bytes");
  }
  if (std::memcmp(header.data(), dataset_format::kMagic.data(), 4) != 0) {
    throw FormatError(FormatErrc::bad_magic, "expected HDS1");
  }
  const auto version = io::load_le<std::uint32_t>(header.data() + 4);
  if (version != dataset_format::kVersion) {
    throw FormatError(FormatErrc::unsupported_version, "version " + std::to_string(version));
  }
  const auto width = io::load_le<std::uint32_t>(header.data() + 8);
  if (width == 0 || width % kWordBits != 0) {
    throw FormatError(FormatErrc::bad_width, "width " + std::to_string(width));
  }
  const auto count = io::load_le<std::uint32_t>(header.data() + 12);

  const std::size_t wpc = width / kWordBits;
  std::vector<Word> words;
  constexpr std::size_t kChunkCodes = 1 << 14;
  std::vector<std::byte> buf;
  for (std::size_t done = 0; done < count;) {
    const std::size_t n = std::min<std::size_t>(kChunkCodes, count - done);
    buf.resize(n * wpc * 8);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
      throw FormatError(FormatErrc::truncated, "body holds fewer than " + std::to_string(count) +
                                                   " codes of " + std::to_string(width) + " bits");
    }
    const std::size_t at = words.size();
    words.resize(at + n * wpc);
    decode_words_le(buf.data(), std::span<Word>(words).subspan(at));
    done += n;
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(FormatErrc::count_mismatch,
                      "trailing bytes after " + std::to_string(count) + " codes");
  }
  return CodeDataset(width, std::move(words));
}

inline void dataset_save(const CodeDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(FormatErrc::io, "cannot create " + path.string());
  dataset_write(dataset, out);
}

inline CodeDataset dataset_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(FormatErrc::io, "cannot open " + path.string());
  return dataset_read(in);
}

}  // namespace hamming
