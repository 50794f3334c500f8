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

#include <sstream>
#include <string>

#include "hamming/dataset.hpp"
#include "hamming/errors.hpp"
#include "test_util.hpp"

namespace hamming {
namespace {

std::string serialize(const CodeDataset& ds) {
  std::ostringstream out(std::ios::binary);
  dataset_write(ds, out);
  return out.str();
}

CodeDataset parse(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return dataset_read(in);
}

FormatErrc parse_error(const std::string& bytes) {
  try {
    parse(bytes);
  } catch (const FormatError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no FormatError";
  return FormatErrc::io;
}

TEST(Dataset, EmptyIsHeaderOnly) {
  const CodeDataset empty(64);
  const auto bytes = serialize(empty);
  EXPECT_EQ(bytes.size(), 16u);
  EXPECT_EQ(bytes.substr(0, 4), "HDS1");
  const auto back = parse(bytes);
  EXPECT_EQ(back.count(), 0u);
  EXPECT_EQ(back.width_bits(), 64u);
}

TEST(Dataset, SizeArithmeticAndRoundTrip) {
  const auto ds = testing::random_dataset(3, 128, 5);
  const auto bytes = serialize(ds);
  EXPECT_EQ(bytes.size(), 16u + 3u * 16u);
  EXPECT_EQ(parse(bytes), ds);
  EXPECT_EQ(serialize(parse(bytes)), bytes);
}

TEST(Dataset, HeaderFieldsAreLittleEndian) {
  CodeDataset ds(64);
  BinaryCode c(64);
  c.words()[0] = 0x0102030405060708ULL;
  ds.push_back(c);
  const auto b = serialize(ds);
  EXPECT_EQ(static_cast<unsigned char>(b[4]), 1u);   // version
  EXPECT_EQ(static_cast<unsigned char>(b[8]), 64u);  // width
  EXPECT_EQ(static_cast<unsigned char>(b[12]), 1u);  // count
  EXPECT_EQ(static_cast<unsigned char>(b[16]), 0x08u);
  EXPECT_EQ(static_cast<unsigned char>(b[23]), 0x01u);
}

TEST(Dataset, RoundTripEveryWidth) {
  for (std::uint32_t m : {64u, 256u, 1024u, 4096u}) {
    const auto ds = testing::random_dataset(37, m, m);
    EXPECT_EQ(parse(serialize(ds)), ds) << m;
  }
}

TEST(Dataset, FileRoundTripIsByteIdentical) {
  testing::TempDir dir("ds");
  const auto ds = testing::random_dataset(1000, 256, 9);
  dataset_save(ds, dir / "a.hds");
  const auto back = dataset_load(dir / "a.hds");
  dataset_save(back, dir / "b.hds");
  std::ifstream a(dir / "a.hds", std::ios::binary), b(dir / "b.hds", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(back, ds);
}

TEST(Dataset, CorruptedMagicNamesMagicMismatch) {
  auto bytes = serialize(testing::random_dataset(2, 64, 1));
  bytes[0] = 'X';
  try {
    parse(bytes);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.code(), FormatErrc::bad_magic);
    EXPECT_NE(std::string(e.what()).find("magic mismatch"), std::string::npos);
  }
}

TEST(Dataset, RejectsMalformedStreams) {
  const auto good = serialize(testing::random_dataset(4, 64, 2));
  EXPECT_EQ(parse_error(good.substr(0, 10)), FormatErrc::truncated);
  EXPECT_EQ(parse_error(good.substr(0, good.size() - 3)), FormatErrc::truncated);
  EXPECT_EQ(parse_error(good + "x"), FormatErrc::count_mismatch);
  auto version = good;
  version[4] = 2;
  EXPECT_EQ(parse_error(version), FormatErrc::unsupported_version);
  auto width = good;
  width[8] = 65;
  EXPECT_EQ(parse_error(width), FormatErrc::bad_width);
}

TEST(Dataset, MissingFileIsFormatIoError) {
  EXPECT_THROW(dataset_load("/nonexistent/dir/x.hds"), FormatError);
}

TEST(Dataset, PushBackChecksWidth) {
  CodeDataset ds(64);
  EXPECT_ANY_THROW(ds.push_back(BinaryCode(128)));
}

}  // namespace
}  // namespace hamming
