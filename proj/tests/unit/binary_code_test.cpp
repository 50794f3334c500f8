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
#include <gtest/gtest.h>

#include <random>

#include "hamming/binary_code.hpp"
#include "hamming/errors.hpp"
#include "hamming/query.hpp"
#include "test_util.hpp"

namespace hamming {
namespace {

using testing::per_bit_distance;
using testing::random_code;

TEST(BinaryCode, BitLayoutIsLittleEndianWithinWords) {
  BinaryCode c(128);
  c.set_bit(0, true);
  c.set_bit(65, true);
  EXPECT_EQ(c.words()[0], 1u);
  EXPECT_EQ(c.words()[1], 2u);
  EXPECT_TRUE(c.bit(65));
  c.flip_bit(65);
  EXPECT_FALSE(c.bit(65));
}

TEST(BinaryCode, RejectsBadWidths) {
  EXPECT_THROW(BinaryCode(0), ConfigError);
  EXPECT_THROW(BinaryCode(100), ConfigError);
  EXPECT_THROW(BinaryCode(64).bit(64), UsageError);
}

TEST(HammingDistance, IdentityAndComplement) {
  const BinaryCode zero(64);
  const BinaryCode ones = BinaryCode::ones(64);
  EXPECT_EQ(hamming_distance(zero, zero), 0u);
  EXPECT_EQ(hamming_distance(zero, ones), 64u);
  EXPECT_EQ(hamming_distance(BinaryCode::ones(4096), BinaryCode(4096)), 4096u);
}

TEST(HammingDistance, WidthMismatchIsUsageError) {
  EXPECT_THROW(hamming_distance(BinaryCode(64), BinaryCode(128)), UsageError);
}

TEST(HammingDistance, MatchesPerBitOracle) {
  std::mt19937_64 rng(7);
  for (std::uint32_t m : {64u, 256u, 1024u, 4096u}) {
    for (int i = 0; i < 500; ++i) {
      const auto a = random_code(m, rng);
      const auto b = random_code(m, rng);
      ASSERT_EQ(hamming_distance(a, b), per_bit_distance(a, b)) << "m=" << m;
    }
  }
}

TEST(HammingDistance, FrozenSeededPair) {
  // Per-bit oracle output for the first pair drawn from mt19937_64(2026) at
  // m = 256, frozen.
  std::mt19937_64 rng(2026);
  const auto a = random_code(256, rng);
  const auto b = random_code(256, rng);
  EXPECT_EQ(per_bit_distance(a, b), 133u);
  EXPECT_EQ(hamming_distance(a, b), 133u);
}

TEST(HammingDistance, MetricAxioms) {
  std::mt19937_64 rng(11);
  for (std::uint32_t m : {64u, 256u}) {
    for (int i = 0; i < 300; ++i) {
      const auto x = random_code(m, rng);
      const auto y = random_code(m, rng);
      const auto z = random_code(m, rng);
      EXPECT_EQ(hamming_distance(x, x), 0u);
      EXPECT_EQ(hamming_distance(x, y), hamming_distance(y, x));
      EXPECT_LE(hamming_distance(x, z), hamming_distance(x, y) + hamming_distance(y, z));
      if (x != y) {
        EXPECT_GT(hamming_distance(x, y), 0u);
      }
    }
  }
}

TEST(ExtractSubcode, Examples) {
  BinaryCode c(64);
  for (std::uint32_t p = 0; p < 4; ++p) EXPECT_EQ(extract_subcode(c, 16, p), 0u);
  c.set_bit(17, true);
  EXPECT_EQ(extract_subcode(c, 16, 1), 2u);
  EXPECT_EQ(extract_subcode(c, 16, 0), 0u);
  EXPECT_EQ(extract_subcode(c, 8, 2), 2u);
}

TEST(ExtractSubcode, ConcatenationReconstructsCode) {
  std::mt19937_64 rng(3);
  for (std::uint32_t w : {8u, 16u, 32u, 64u}) {
    const auto code = random_code(256, rng);
    BinaryCode rebuilt(256);
    for (std::uint32_t p = 0; p < 256 / w; ++p) {
      const auto v = extract_subcode(code, w, p);
      if (w < 64) {
        EXPECT_LT(v, std::uint64_t{1} << w);
      }
      for (std::uint32_t b = 0; b < w; ++b) rebuilt.set_bit(p * w + b, (v >> b) & 1u);
    }
    EXPECT_EQ(rebuilt, code) << "sub_width " << w;
  }
}

TEST(ExtractSubcode, RejectsBadArguments) {
  const BinaryCode c(64);
  EXPECT_THROW(extract_subcode(c, 12, 0), UsageError);
  EXPECT_THROW(extract_subcode(c, 16, 4), UsageError);
}

TEST(QuerySpec, Validation) {
  EXPECT_NO_THROW((QuerySpec{BinaryCode(64), 64}.validate(64)));
  EXPECT_THROW((QuerySpec{BinaryCode(64), 65}.validate(64)), InputError);
  EXPECT_THROW((QuerySpec{BinaryCode(128), 3}.validate(64)), InputError);
}

TEST(NeighborSet, SetSemantics) {
  NeighborSet a({{3, 1}, {1, 0}});
  NeighborSet b({{1, 0}, {3, 1}});
  NeighborSet c({{1, 0}, {3, 2}});
  EXPECT_TRUE(same_set(a, b));
  EXPECT_FALSE(same_set(a, c));
  EXPECT_TRUE(a.contains(3));
  EXPECT_EQ(symmetric_difference_ids(a, NeighborSet({{1, 0}, {4, 2}})),
            (std::vector<DocId>{3, 4}));
}

}  // namespace
}  // namespace hamming
