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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hamming/errors.hpp"

namespace hamming {

using Word = std::uint64_t;
inline constexpr std::uint32_t kWordBits = 64;

// Fixed-width bit vector packed into 64-bit words. Bit i of word w is code
// bit 64*w + i. Widths are whole multiples of 64, so there are no padding bits.
class BinaryCode {
 public:
  BinaryCode() = default;

  explicit BinaryCode(std::uint32_t width_bits)
      : width_bits_(checked_width(width_bits)), words_(width_bits / kWordBits, 0) {}

  BinaryCode(std::uint32_t width_bits, std::span<const Word> words)
      : width_bits_(checked_width(width_bits)), words_(words.begin(), words.end()) {
    if (words_.size() * kWordBits != width_bits_) {
      throw UsageError("BinaryCode: " + std::to_string(words_.size()) +
                       " words do not make " + std::to_string(width_bits_) + " bits");
    }
  }

  static BinaryCode ones(std::uint32_t width_bits) {
    BinaryCode c(width_bits);
    for (auto& w : c.words_) w = ~Word{0};
    return c;
  }

  std::uint32_t width_bits() const noexcept { return width_bits_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  bool bit(std::uint32_t i) const {
    check_index(i);
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }

  void set_bit(std::uint32_t i, bool value) {
    check_index(i);
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  void flip_bit(std::uint32_t i) {
    check_index(i);
    words_[i / kWordBits] ^= Word{1} << (i % kWordBits);
  }

  friend bool operator==(const BinaryCode&, const BinaryCode&) = default;

  static std::uint32_t checked_width(std::uint32_t width_bits) {
    if (width_bits == 0 || width_bits % kWordBits != 0) {
      throw ConfigError("code width must be a positive multiple of 64, got " +
                        std::to_string(width_bits));
    }
    return width_bits;
  }

 private:
  void check_index(std::uint32_t i) const {
    if (i >= width_bits_) {
      throw UsageError("bit index " + std::to_string(i) + " out of range for width " +
                       std::to_string(width_bits_));
    }
  }

  std::uint32_t width_bits_ = 0;
  std::vector<Word> words_;
};

// Popcount-of-XOR kernel over raw word spans. Callers guarantee equal length.
inline std::uint32_t hamming_words(const Word* a, const Word* b, std::size_t n) noexcept {
  std::uint32_t d = 0;
  for (std::size_t i = 0; i < n; ++i) d += static_cast<std::uint32_t>(std::popcount(a[i] ^ b[i]));
  return d;
}

inline std::uint32_t hamming_distance(std::span<const Word> a, std::span<const Word> b) {
  if (a.size() != b.size()) {
    throw UsageError("hamming_distance: width mismatch (" + std::to_string(a.size() * kWordBits) +
                     " vs " + std::to_string(b.size() * kWordBits) + " bits)");
  }
  return hamming_words(a.data(), b.data(), a.size());
}

inline std::uint32_t hamming_distance(const BinaryCode& a, const BinaryCode& b) {
  return hamming_distance(a.words(), b.words());
}

inline bool is_supported_sub_width(std::uint32_t sub_width) noexcept {
  return sub_width == 8 || sub_width == 16 || sub_width == 32 || sub_width == 64;
}

// Value of bits [position*sub_width, (position+1)*sub_width). Supported
// sub-widths divide 64, so a sub-code never straddles a word boundary.
inline std::uint64_t extract_subcode(std::span<const Word> words, std::uint32_t sub_width,
                                     std::uint32_t position) {
  if (!is_supported_sub_width(sub_width)) {
    throw UsageError("extract_subcode: unsupported sub-code width " + std::to_string(sub_width));
  }
  const std::uint64_t width = words.size() * kWordBits;
  if (std::uint64_t{position} * sub_width >= width) {
    throw UsageError("extract_subcode: position " + std::to_string(position) +
                     " out of range for width " + std::to_string(width));
  }
  const std::uint64_t first = std::uint64_t{position} * sub_width;
  const Word word = words[first / kWordBits];
  if (sub_width == 64) return word;
  const Word mask = (Word{1} << sub_width) - 1;
  return (word >> (first % kWordBits)) & mask;
}

inline std::uint64_t extract_subcode(const BinaryCode& code, std::uint32_t sub_width,
                                     std::uint32_t position) {
  return extract_subcode(code.words(), sub_width, position);
}

}  // namespace hamming
