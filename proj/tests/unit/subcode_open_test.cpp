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

#include "hamming/flat_index.hpp"
#include "hamming/subcode_index.hpp"
#include "test_util.hpp"

namespace hamming {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

OpenErrc open_error(const fs::path& dir, std::string* message = nullptr) {
  try {
    SubCodeIndex::open(dir);
  } catch (const OpenError& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "open succeeded";
  return OpenErrc::corrupt_file;
}

class OpenTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dataset_ = testing::random_dataset(5'000, 64, 31);
    subcode_build(dataset_, plan_geometry(64, 16), 5, dir_.path());
  }

  void overwrite(const fs::path& p, std::size_t offset, char byte) {
    std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(static_cast<std::streamoff>(offset));
    f.put(byte);
  }

  TempDir dir_{"open"};
  CodeDataset dataset_;
};

TEST(SubCodeOpen, EmptyDirectoryIsMissingManifest) {
  TempDir dir("open-empty");
  std::string msg;
  EXPECT_EQ(open_error(dir.path(), &msg), OpenErrc::missing_manifest);
  EXPECT_NE(msg.find("missing manifest"), std::string::npos);
}

TEST_F(OpenTest, DeletedPostingsFileIsNamed) {
  fs::remove(dir_ / "shard-3.pst");
  std::string msg;
  EXPECT_EQ(open_error(dir_.path(), &msg), OpenErrc::missing_file);
  EXPECT_NE(msg.find("missing shard file"), std::string::npos);
  EXPECT_NE(msg.find("shard-3.pst"), std::string::npos);
}

TEST_F(OpenTest, MissingMarkerIsIncompleteBuild) {
  fs::remove(dir_ / "COMPLETE");
  EXPECT_EQ(open_error(dir_.path()), OpenErrc::incomplete_build);
}

TEST_F(OpenTest, CorruptManifest) {
  overwrite(dir_ / "manifest", 0, 'X');
  EXPECT_EQ(open_error(dir_.path()), OpenErrc::corrupt_manifest);
}

TEST_F(OpenTest, ManifestVersionMismatch) {
  overwrite(dir_ / "manifest", 4, 9);
  EXPECT_EQ(open_error(dir_.path()), OpenErrc::version_mismatch);
}

TEST_F(OpenTest, TruncatedForwardFile) {
  fs::resize_file(dir_ / "shard-0.fwd", fs::file_size(dir_ / "shard-0.fwd") - 8);
  EXPECT_EQ(open_error(dir_.path()), OpenErrc::truncated_file);
}

TEST_F(OpenTest, TruncatedPostingsFile) {
  fs::resize_file(dir_ / "shard-1.pst", fs::file_size(dir_ / "shard-1.pst") - 1);
  EXPECT_EQ(open_error(dir_.path()), OpenErrc::truncated_file);
}

TEST_F(OpenTest, TruncatedTermTable) {
  fs::resize_file(dir_ / "shard-2.trm", fs::file_size(dir_ / "shard-2.trm") - 26);
  EXPECT_EQ(open_error(dir_.path()), OpenErrc::truncated_file);
}

TEST_F(OpenTest, CorruptTermIndex) {
  overwrite(dir_ / "shard-4.tix", 0, 'Z');
  EXPECT_EQ(open_error(dir_.path()), OpenErrc::corrupt_file);
}

TEST_F(OpenTest, ReopenServesWithoutRebuilding) {
  const auto flat = FlatIndex::build(dataset_);
  const auto before = subcode_build_invocations();
  const auto index = subcode_open(dir_.path());
  EXPECT_EQ(subcode_build_invocations(), before);
  EXPECT_EQ(index.count(), dataset_.count());
  EXPECT_EQ(index.geometry().sub_width, 16u);
  EXPECT_EQ(index.shard_count(), 5u);
  for (DocId q = 0; q < 50; ++q) {
    for (std::uint32_t r : {0u, 3u, 7u, 11u}) {
      const QuerySpec spec{dataset_.code(q * 97), r};
      ASSERT_TRUE(same_set(subcode_range_search(index, spec), flat.range_search(spec)));
    }
  }
  EXPECT_EQ(subcode_build_invocations(), before);
}

TEST_F(OpenTest, RebuildOverExistingIndexReplacesIt) {
  const auto other = testing::random_dataset(700, 128, 5);
  subcode_build(other, plan_geometry(128, 32), 2, dir_.path());
  const auto index = SubCodeIndex::open(dir_.path());
  EXPECT_EQ(index.count(), 700u);
  EXPECT_EQ(index.width_bits(), 128u);
  EXPECT_EQ(index.code(699), other.code(699));
}

TEST(SubCodeBuild, RejectsMismatchedGeometry) {
  TempDir dir("build-bad");
  const auto ds = testing::random_dataset(10, 64, 1);
  EXPECT_THROW(subcode_build(ds, plan_geometry(128, 16), 2, dir.path()), InputError);
  EXPECT_THROW(subcode_build(ds, plan_geometry(64, 16), 0, dir.path()), ConfigError);
}

TEST(SubCodeBuild, UnwritableDirectoryIsBuildError) {
  if (::geteuid() == 0) GTEST_SKIP() << "root ignores directory permissions";
  TempDir dir("build-ro");
  fs::permissions(dir.path(), fs::perms::owner_read | fs::perms::owner_exec);
  const auto ds = testing::random_dataset(10, 64, 1);
  EXPECT_THROW(subcode_build(ds, plan_geometry(64, 16), 2, dir / "idx"), BuildError);
  fs::permissions(dir.path(), fs::perms::owner_all);
}

TEST(SubCodeBuild, FileInPlaceOfDirectoryIsBuildError) {
  TempDir dir("build-file");
  std::ofstream(dir / "blocker") << "x";
  const auto ds = testing::random_dataset(10, 64, 1);
  EXPECT_THROW(subcode_build(ds, plan_geometry(64, 16), 2, dir / "blocker" / "idx"), BuildError);
}

}  // namespace
}  // namespace hamming
