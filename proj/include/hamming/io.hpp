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

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <system_error>
#include <type_traits>
#include <utility>
#include <vector>

namespace hamming::io {

// Owning POSIX file descriptor with positioned reads and buffered appends.
class File {
 public:
  File() = default;
  File(const File&) = delete;
  File& operator=(const File&) = delete;
  File(File&& other) noexcept
      : fd_(std::exchange(other.fd_, -1)), path_(std::move(other.path_)) {}
  File& operator=(File&& other) noexcept {
    if (this != &other) {
      close();
      fd_ = std::exchange(other.fd_, -1);
      path_ = std::move(other.path_);
    }
    return *this;
  }
  ~File() { close(); }

  static File open_read(const std::filesystem::path& path) {
    return File(::open(path.c_str(), O_RDONLY | O_CLOEXEC), path);
  }

  static File create(const std::filesystem::path& path) {
    return File(::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644), path);
  }

  const std::filesystem::path& path() const noexcept { return path_; }

  std::uint64_t size() const {
    struct stat st {};
    if (::fstat(fd_, &st) != 0) throw_errno("stat");
    return static_cast<std::uint64_t>(st.st_size);
  }

  // Reads up to out.size() bytes at `offset`; returns the count actually read
  // (short only at end of file).
  std::size_t pread_some(std::span<std::byte> out, std::uint64_t offset) const {
    std::size_t done = 0;
    while (done < out.size()) {
      const ssize_t n = ::pread(fd_, out.data() + done, out.size() - done,
                                static_cast<off_t>(offset + done));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_errno("read");
      }
      if (n == 0) break;
      done += static_cast<std::size_t>(n);
    }
    return done;
  }

  bool pread_exact(std::span<std::byte> out, std::uint64_t offset) const {
    return pread_some(out, offset) == out.size();
  }

  void write_all(std::span<const std::byte> data) {
    std::size_t done = 0;
    while (done < data.size()) {
      const ssize_t n = ::write(fd_, data.data() + done, data.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_errno("write");
      }
      done += static_cast<std::size_t>(n);
    }
  }

  void sync() {
    if (::fsync(fd_) != 0) throw_errno("fsync");
  }

  void close() noexcept {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  File(int fd, std::filesystem::path path) : fd_(fd), path_(std::move(path)) {
    if (fd_ < 0) throw_errno("open");
  }

  [[noreturn]] void throw_errno(const char* op) const {
    throw std::system_error(errno, std::generic_category(),
                            std::string(op) + " " + path_.string());
  }

  int fd_ = -1;
  std::filesystem::path path_;
};

// Accumulates small writes and flushes them to a File in large blocks.
class BufferedWriter {
 public:
  explicit BufferedWriter(File& file, std::size_t capacity = 1 << 20) : file_(file) {
    buffer_.reserve(capacity);
    capacity_ = capacity;
  }
  BufferedWriter(const BufferedWriter&) = delete;
  BufferedWriter& operator=(const BufferedWriter&) = delete;
  ~BufferedWriter() = default;

  void append(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::byte*>(data);
    if (buffer_.size() + n > capacity_) flush();
    if (n >= capacity_) {
      file_.write_all({p, n});
      written_ += n;
      return;
    }
    buffer_.insert(buffer_.end(), p, p + n);
  }

  template <typename T>
  void put_le(T value) {
    static_assert(std::is_unsigned_v<T>);
    unsigned char bytes[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
    append(bytes, sizeof(T));
  }

  void flush() {
    if (buffer_.empty()) return;
    file_.write_all(buffer_);
    written_ += buffer_.size();
    buffer_.clear();
  }

  // Bytes handed to append() so far, flushed or not.
  std::uint64_t position() const noexcept { return written_ + buffer_.size(); }

 private:
  File& file_;
  std::vector<std::byte> buffer_;
  std::size_t capacity_ = 0;
  std::uint64_t written_ = 0;
};

template <typename T>
T load_le(const std::byte* p) {
  static_assert(std::is_unsigned_v<T>);
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(std::to_integer<unsigned>(p[i])) << (8 * i);
  return v;
}

template <typename T>
void store_le(std::byte* p, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) p[i] = static_cast<std::byte>(value >> (8 * i));
}

// fsync on the directory so freshly created entries survive a crash.
inline void sync_directory(const std::filesystem::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace hamming::io
