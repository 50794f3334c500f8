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

#include <fstream>
#include <random>
#include <set>

#include "hamming/datagen.hpp"
#include "test_util.hpp"

namespace hamming {
namespace {

TEST(GenSynthetic, ZeroCountIsEmpty) {
  const auto ds = gen_synthetic({0, 256, 1, 0, 0.0});
  EXPECT_EQ(ds.count(), 0u);
  EXPECT_EQ(ds.width_bits(), 256u);
}

TEST(GenSynthetic, SingleClusterWithoutFlipsRepeatsTheCenter) {
  const auto ds = gen_synthetic({100, 128, 9, 1, 0.0});
  for (DocId i = 1; i < 100; ++i) EXPECT_EQ(ds.code(i), ds.code(0));
}

TEST(GenSynthetic, SameSeedSameBytes) {
  testing::TempDir dir("gen");
  const SyntheticSpec spec{5'000, 256, 77, 12, 0.1};
  dataset_save(gen_synthetic(spec), dir / "a.hds");
  dataset_save(gen_synthetic(spec), dir / "b.hds");
  std::ifstream a(dir / "a.hds", std::ios::binary), b(dir / "b.hds", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa.size(), 16u + 5'000u * 32u);
  EXPECT_EQ(sa, sb);
  EXPECT_NE(gen_synthetic({5'000, 256, 78, 12, 0.1}), gen_synthetic(spec));
}

TEST(GenSynthetic, PrefixStableAcrossCounts) {
  const auto small = gen_synthetic({10, 64, 5, 0, 0.0});
  const auto large = gen_synthetic({1'000, 64, 5, 0, 0.0});
  for (DocId i = 0; i < 10; ++i) EXPECT_EQ(small.code(i), large.code(i));
}

TEST(GenSynthetic, UniformBitsAreBalanced) {
  const auto ds = gen_synthetic({2'000, 1024, 3, 0, 0.0});
  std::uint64_t ones = 0;
  for (auto w : ds.words()) ones += static_cast<std::uint64_t>(__builtin_popcountll(w));
  const double frac = static_cast<double>(ones) / (2'000.0 * 1024.0);
  EXPECT_NEAR(frac, 0.5, 0.005);
}

TEST(GenSynthetic, ClusterFlipRateMatchesProbability) {
  // Item i picks its center before drawing flips, so the same spec with
  // p = 0 yields each item's own center.
  const SyntheticSpec spec{3'000, 1024, 4, 5, 0.1};
  const auto ds = gen_synthetic(spec);
  const auto centers = gen_synthetic({3'000, 1024, 4, 5, 0.0});
  double total = 0;
  std::set<std::vector<Word>> distinct;
  for (DocId i = 0; i < ds.count(); ++i) {
    total += hamming_distance(ds.code(i), centers.code(i));
    const auto w = centers.code_words(i);
    distinct.insert(std::vector<Word>(w.begin(), w.end()));
  }
  EXPECT_EQ(distinct.size(), 5u);
  // Mean of 3M Bernoulli(0.1) flips per item: 102.4 with sd ~0.17.
  EXPECT_NEAR(total / ds.count(), 102.4, 1.5);
}

TEST(GenSynthetic, RejectsBadSpecs) {
  EXPECT_THROW(gen_synthetic({10, 100, 1, 0, 0.0}), ConfigError);
  EXPECT_THROW(gen_synthetic({10, 64, 1, 2, 0.6}), ConfigError);
  EXPECT_THROW(gen_synthetic({10, 64, 1, 2, -0.1}), ConfigError);
}

TEST(Perturb, ExactDistancePostcondition) {
  std::mt19937_64 rng(5);
  for (std::uint32_t m : {64u, 256u, 1024u, 4096u}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto code = testing::random_code(m, rng);
      const auto flips = static_cast<std::uint32_t>(rng() % (m + 1));
      ASSERT_EQ(hamming_distance(perturb(code, flips, rng()), code), flips);
    }
  }
}

TEST(Perturb, Examples) {
  std::mt19937_64 rng(6);
  const auto code = testing::random_code(256, rng);
  EXPECT_EQ(perturb(code, 0, 1), code);
  BinaryCode complement(256);
  for (std::size_t w = 0; w < 4; ++w) complement.words()[w] = ~code.words()[w];
  EXPECT_EQ(perturb(code, 256, 1), complement);
  EXPECT_EQ(hamming_distance(perturb(code, 7, 99), code), 7u);
  EXPECT_EQ(perturb(code, 7, 99), perturb(code, 7, 99));
  EXPECT_THROW(perturb(code, 257, 1), InputError);
}

}  // namespace
}  // namespace hamming
