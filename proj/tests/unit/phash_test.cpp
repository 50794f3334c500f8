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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hamming/datagen.hpp"
#include "phash_oracle.hpp"
#include "test_util.hpp"

namespace hamming {
namespace {

using testing::fixture;
using testing::slow_phash;

std::string hex(const BinaryCode& c) {
  std::string out;
  char buf[17];
  for (auto w : c.words()) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w));
    out += buf;
  }
  return out;
}

TEST(PHash, BlockSides) {
  EXPECT_EQ(phash_block_side(64), 8u);
  EXPECT_EQ(phash_block_side(256), 16u);
  EXPECT_EQ(phash_block_side(1024), 32u);
  EXPECT_EQ(phash_block_side(4096), 64u);
  EXPECT_THROW(phash_block_side(128), ConfigError);
}

TEST(PHash, ConstantImageHashesToZero) {
  for (std::uint32_t m : {64u, 256u, 1024u, 4096u}) {
    for (double level : {0.0, 1.0, 77.0, 255.0}) {
      for (std::uint32_t side : {7u, 32u, 100u}) {
        const GrayscaleImage img{side, side + 3, std::vector<double>(side * (side + 3), level)};
        EXPECT_EQ(phash(img, m), BinaryCode(m)) << m << " " << level << " " << side;
      }
    }
  }
}

TEST(PHash, BrightnessScalingLeavesHashUnchanged) {
  for (int i = 0; i < 12; ++i) {
    const auto img = fixture(i, 45 + 7 * i, 60 + 3 * i, 127);
    GrayscaleImage twice = img;
    for (auto& p : twice.pixels) p *= 2;
    for (std::uint32_t m : {64u, 256u}) EXPECT_EQ(phash(img, m), phash(twice, m)) << i << " " << m;
  }
}

TEST(PHash, MatchesSlowDctAtEightByEight) {
  for (int i = 0; i < 20; ++i) {
    const auto img = fixture(i, 32, 32);
    ASSERT_EQ(phash(img, 64), slow_phash(img, 8)) << "fixture " << i;
  }
}

TEST(PHash, MatchesSlowDctAtSixteenBySixteen) {
  for (int i = 0; i < 20; ++i) {
    const auto img = fixture(100 + i, 64, 64);
    ASSERT_EQ(phash(img, 256), slow_phash(img, 16)) << "fixture " << i;
  }
}

TEST(PHash, FrozenTestPattern) {
  // Slow-DCT reference output for fixture 3 at 32 x 32, frozen.
  const auto img = fixture(3, 32, 32);
  EXPECT_EQ(hex(slow_phash(img, 8)), "49db1262c60e3ef4");
  EXPECT_EQ(hex(phash(img, 64)), "49db1262c60e3ef4");
}

TEST(PHash, BalancedOnTexturedImages) {
  // With distinct coefficients exactly 127 of the 255 AC terms exceed their
  // median. The zeroed DC term adds a bit only when the median is negative.
  for (int i = 0; i < 10; ++i) {
    const auto img = fixture(5 * i, 80, 80);
    const auto code = phash(img, 256);
    std::uint32_t ones = 0;
    for (auto w : code.words()) ones += static_cast<std::uint32_t>(__builtin_popcountll(w));
    auto ac = dct_low_block(resize_bilinear(img, 64, 64), 16);
    ac.erase(ac.begin());
    std::nth_element(ac.begin(), ac.begin() + 127, ac.end());
    EXPECT_EQ(code.bit(0), ac[127] < 0) << i;
    EXPECT_EQ(ones - (code.bit(0) ? 1u : 0u), 127u) << i;
  }
}

TEST(PHash, ResizeKeepsConstantsAndAlignsCenters) {
  const GrayscaleImage flat{5, 3, std::vector<double>(15, 42.0)};
  for (double p : resize_bilinear(flat, 32, 32).pixels) EXPECT_DOUBLE_EQ(p, 42.0);
  // Doubling a 2-pixel ramp samples at 1/4 and 3/4 of the way between pixels.
  const GrayscaleImage ramp{2, 1, {0.0, 100.0}};
  const auto up = resize_bilinear(ramp, 4, 1);
  EXPECT_DOUBLE_EQ(up.pixels[0], 0.0);
  EXPECT_DOUBLE_EQ(up.pixels[1], 25.0);
  EXPECT_DOUBLE_EQ(up.pixels[2], 75.0);
  EXPECT_DOUBLE_EQ(up.pixels[3], 100.0);
}

TEST(PHash, SimilarImagesHashClose) {
  const auto img = fixture(4, 64, 64);
  GrayscaleImage noisy = img;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jitter(-3, 3);
  for (auto& p : noisy.pixels) p = std::clamp(p + jitter(rng), 0.0, 255.0);
  const auto other = fixture(9, 64, 64);
  EXPECT_LT(hamming_distance(phash(img, 256), phash(noisy, 256)),
            hamming_distance(phash(img, 256), phash(other, 256)));
}

TEST(Pgm, RoundTripAndDirectoryHashing) {
  testing::TempDir dir("pgm");
  std::vector<GrayscaleImage> imgs;
  for (int i = 0; i < 4; ++i) {
    imgs.push_back(fixture(i, 40 + i, 30));
    write_pgm(imgs.back(), dir / ("img" + std::to_string(i) + ".pgm"));
  }
  const auto back = read_pgm(dir / "img2.pgm");
  EXPECT_EQ(back.width, 42u);
  EXPECT_EQ(back.pixels, imgs[2].pixels);
  std::vector<std::filesystem::path> order;
  const auto ds = phash_directory(dir.path(), 64, &order);
  ASSERT_EQ(ds.count(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(order[i].filename(), "img" + std::to_string(i) + ".pgm");
    EXPECT_EQ(ds.code(static_cast<DocId>(i)), phash(imgs[i], 64));
  }
}

TEST(Pgm, CommentsAndErrors) {
  testing::TempDir dir("pgm-bad");
  {
    std::ofstream f(dir / "c.pgm", std::ios::binary);
    f << "P5\n# comment\n2 1\n255\n";
    f.put(static_cast<char>(10));
    f.put(static_cast<char>(200));
  }
  const auto img = read_pgm(dir / "c.pgm");
  EXPECT_EQ(img.pixels, (std::vector<double>{10, 200}));
  std::ofstream(dir / "p2.pgm") << "P2\n1 1\n255\n0\n";
  EXPECT_THROW(read_pgm(dir / "p2.pgm"), InputError);
  {
    std::ofstream f(dir / "short.pgm", std::ios::binary);
    f << "P5\n4 4\n255\nabc";
  }
  EXPECT_THROW(read_pgm(dir / "short.pgm"), InputError);
  EXPECT_THROW(read_pgm(dir / "none.pgm"), InputError);
}

}  // namespace
}  // namespace hamming
