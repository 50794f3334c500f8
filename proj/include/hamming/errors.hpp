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

#include <stdexcept>
#include <string>

namespace hamming {

// Programming errors: violated preconditions such as comparing codes of
// different widths. Not meant to be caught and recovered from.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Base for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: width mismatches between a query and an index, radius out
// of range, degenerate images.
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration: unsupported sub-code width, width not a multiple of
// 64, malformed config files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t required_bytes)
      : Error(what + " (" + std::to_string(required_bytes) + " bytes required)"),
        required_bytes_(required_bytes) {}

  std::size_t required_bytes() const noexcept { return required_bytes_; }

 private:
  std::size_t required_bytes_;
};

enum class FormatErrc {
  bad_magic,
  unsupported_version,
  truncated,
  bad_width,
  count_mismatch,
  io,
};

inline const char* to_string(FormatErrc code) {
  switch (code) {
    case FormatErrc::bad_magic: return "magic mismatch";
    case FormatErrc::unsupported_version: return "unsupported version";
    case FormatErrc::truncated: return "truncated stream";
    case FormatErrc::bad_width: return "width not a multiple of 64";
    case FormatErrc::count_mismatch: return "count mismatch";
    case FormatErrc::io: return "i/o failure";
  }
  return "unknown format error";
}

// Parse failures of the dataset file format.
class FormatError : public Error {
 public:
  FormatError(FormatErrc code, const std::string& detail)
      : Error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  FormatErrc code() const noexcept { return code_; }

 private:
  FormatErrc code_;
};

class BuildError : public Error {
 public:
  using Error::Error;
};

enum class OpenErrc {
  missing_manifest,
  corrupt_manifest,
  version_mismatch,
  incomplete_build,
  missing_file,
  truncated_file,
  corrupt_file,
};

inline const char* to_string(OpenErrc code) {
  switch (code) {
    case OpenErrc::missing_manifest: return "missing manifest";
    case OpenErrc::corrupt_manifest: return "corrupt manifest";
    case OpenErrc::version_mismatch: return "version mismatch";
    case OpenErrc::incomplete_build: return "incomplete build";
    case OpenErrc::missing_file: return "missing shard file";
    case OpenErrc::truncated_file: return "truncated shard file";
    case OpenErrc::corrupt_file: return "corrupt shard file";
  }
  return "unknown open error";
}

class OpenError : public Error {
 public:
  OpenError(OpenErrc code, const std::string& detail)
      : Error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
        code_(code) {}

  OpenErrc code() const noexcept { return code_; }

 private:
  OpenErrc code_;
};

// Failure while serving a query, e.g. a short read from a shard file.
class QueryError : public Error {
 public:
  using Error::Error;
};

}  // namespace hamming
