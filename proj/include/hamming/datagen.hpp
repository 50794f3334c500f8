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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hamming/binary_code.hpp"
#include "hamming/dataset.hpp"
#include "hamming/errors.hpp"

namespace hamming {

// ---------------------------------------------------------------------------
// Synthetic codes
// ---------------------------------------------------------------------------

struct SyntheticSpec {
  std::size_t count = 0;
  std::uint32_t width_bits = 64;
  std::uint64_t seed = 0;
  // 0 means i.i.d. uniform bits.
  std::size_t cluster_count = 0;
  // Per-bit flip probability around a cluster center, in [0, 0.5].
  double flip_probability = 0.0;
};

namespace detail {

// splitmix64 finalizer; derives independent per-item seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  std::uint64_t z = seed ^ (index * 0x9e3779b97f4a7c15ULL) ^ (stream * 0xd1b54a32d192ed03ULL);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kStreamCode = 1;
inline constexpr std::uint64_t kStreamCenter = 2;

}  // namespace detail

// Deterministic in `spec`: item j draws only from a generator seeded with
// (seed, j), so generation order and parallelism cannot change the output.
inline CodeDataset gen_synthetic(const SyntheticSpec& spec) {
  BinaryCode::checked_width(spec.width_bits);
  if (!(spec.flip_probability >= 0.0 && spec.flip_probability <= 0.5)) {
    throw ConfigError("flip probability must lie in [0, 0.5]");
  }
  if (spec.count > UINT32_MAX) throw ConfigError("count exceeds the 32-bit id space");
  const std::size_t wpc = spec.width_bits / kWordBits;

  std::vector<Word> centers(spec.cluster_count * wpc);
  for (std::size_t c = 0; c < spec.cluster_count; ++c) {
    std::mt19937_64 rng(detail::mix_seed(spec.seed, c, detail::kStreamCenter));
    for (std::size_t w = 0; w < wpc; ++w) centers[c * wpc + w] = rng();
  }

  std::vector<Word> words(spec.count * wpc);
  for (std::size_t i = 0; i < spec.count; ++i) {
    std::mt19937_64 rng(detail::mix_seed(spec.seed, i, detail::kStreamCode));
    Word* out = words.data() + i * wpc;
    if (spec.cluster_count == 0) {
      for (std::size_t w = 0; w < wpc; ++w) out[w] = rng();
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick(0, spec.cluster_count - 1);
    const Word* center = centers.data() + pick(rng) * wpc;
    std::copy(center, center + wpc, out);
    if (spec.flip_probability <= 0.0) continue;
    // Gaps between flipped bits are geometric for independent Bernoulli flips.
    std::geometric_distribution<std::uint32_t> gap(spec.flip_probability);
    for (std::uint64_t pos = gap(rng); pos < spec.width_bits; pos += 1 + std::uint64_t{gap(rng)}) {
      out[pos / kWordBits] ^= Word{1} << (pos % kWordBits);
    }
  }
  return CodeDataset(spec.width_bits, std::move(words));
}

// Flips exactly `flips` distinct bits chosen by `seed`.
inline BinaryCode perturb(const BinaryCode& code, std::uint32_t flips, std::uint64_t seed) {
  if (flips > code.width_bits()) {
    throw InputError("cannot flip " + std::to_string(flips) + " bits of a " +
                     std::to_string(code.width_bits()) + "-bit code");
  }
  std::vector<std::uint32_t> positions(code.width_bits());
  for (std::uint32_t i = 0; i < positions.size(); ++i) positions[i] = i;
  std::mt19937_64 rng(seed);
  BinaryCode out = code;
  // Partial Fisher-Yates: the first `flips` slots become a uniform sample.
  for (std::uint32_t i = 0; i < flips; ++i) {
    std::uniform_int_distribution<std::uint32_t> pick(i, code.width_bits() - 1);
    std::swap(positions[i], positions[pick(rng)]);
    out.flip_bit(positions[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Perceptual hash
// ---------------------------------------------------------------------------

struct GrayscaleImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<double> pixels;  // row-major, values in [0, 255]

  double at(std::uint32_t x, std::uint32_t y) const { return pixels[std::size_t{y} * width + x]; }

  void validate() const {
    if (width == 0 || height == 0) throw InputError("image has a zero dimension");
    if (pixels.size() != std::size_t{width} * height) {
      throw InputError("image pixel count does not match its dimensions");
    }
  }
};

// Side length k of the k x k coefficient block for a supported hash width.
inline std::uint32_t phash_block_side(std::uint32_t width_bits) {
  switch (width_bits) {
    case 64: return 8;
    case 256: return 16;
    case 1024: return 32;
    case 4096: return 64;
    default:
      throw ConfigError("pHash width must be 64, 256, 1024 or 4096 bits; got " +
                        std::to_string(width_bits));
  }
}

// Bilinear resampling with pixel-center alignment; edges clamp.
inline GrayscaleImage resize_bilinear(const GrayscaleImage& img, std::uint32_t width,
                                      std::uint32_t height) {
  img.validate();
  GrayscaleImage out{width, height, std::vector<double>(std::size_t{width} * height)};
  auto coord = [](std::uint32_t dst, std::uint32_t src_len, std::uint32_t dst_len) {
    const double s = (dst + 0.5) * static_cast<double>(src_len) / dst_len - 0.5;
    return std::clamp(s, 0.0, static_cast<double>(src_len - 1));
  };
  for (std::uint32_t y = 0; y < height; ++y) {
    const double sy = coord(y, img.height, height);
    const auto y0 = static_cast<std::uint32_t>(sy);
    const std::uint32_t y1 = std::min(y0 + 1, img.height - 1);
    const double fy = sy - y0;
    for (std::uint32_t x = 0; x < width; ++x) {
      const double sx = coord(x, img.width, width);
      const auto x0 = static_cast<std::uint32_t>(sx);
      const std::uint32_t x1 = std::min(x0 + 1, img.width - 1);
      const double fx = sx - x0;
      const double top = img.at(x0, y0) * (1 - fx) + img.at(x1, y0) * fx;
      const double bottom = img.at(x0, y1) * (1 - fx) + img.at(x1, y1) * fx;
      out.pixels[std::size_t{y} * width + x] = top * (1 - fy) + bottom * fy;
    }
  }
  return out;
}

// Lowest `k` rows of the orthonormal DCT-II basis for length n:
// basis[u][x] = a(u) cos(pi (2x + 1) u / 2n), a(0) = sqrt(1/n), a(u) = sqrt(2/n).
inline std::vector<double> dct_basis(std::uint32_t k, std::uint32_t n) {
  std::vector<double> basis(std::size_t{k} * n);
  for (std::uint32_t u = 0; u < k; ++u) {
    const double a = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::uint32_t x = 0; x < n; ++x) {
      basis[std::size_t{u} * n + x] = a * std::cos(std::numbers::pi * (2.0 * x + 1.0) * u / (2.0 * n));
    }
  }
  return basis;
}

// Top-left k x k block of the 2-D DCT-II of a square n x n image, row-major
// with the vertical frequency as the row index.
inline std::vector<double> dct_low_block(const GrayscaleImage& img, std::uint32_t k) {
  const std::uint32_t n = img.width;
  const auto basis = dct_basis(k, n);
  // Columns first: tmp[u][x] = sum_y basis[u][y] img[y][x].
  std::vector<double> tmp(std::size_t{k} * n, 0.0);
  for (std::uint32_t u = 0; u < k; ++u) {
    for (std::uint32_t y = 0; y < n; ++y) {
      const double b = basis[std::size_t{u} * n + y];
      const double* row = img.pixels.data() + std::size_t{y} * n;
      double* acc = tmp.data() + std::size_t{u} * n;
      for (std::uint32_t x = 0; x < n; ++x) acc[x] += b * row[x];
    }
  }
  std::vector<double> block(std::size_t{k} * k, 0.0);
  for (std::uint32_t u = 0; u < k; ++u) {
    for (std::uint32_t v = 0; v < k; ++v) {
      double sum = 0.0;
      for (std::uint32_t x = 0; x < n; ++x) {
        sum += tmp[std::size_t{u} * n + x] * basis[std::size_t{v} * n + x];
      }
      block[std::size_t{u} * k + v] = sum;
    }
  }
  return block;
}

// Coefficient differences below this fraction of the block's largest
// magnitude are rounding residue. Such coefficients count as zero, and as
// tied with the median, so a constant image hashes to all zeros and
// symmetric images do not depend on summation order. The cut-off scales
// with the block, which keeps uniform brightness scaling hash-invariant.
inline constexpr double kCoefficientTolerance = 1e-9;

// Thresholds a k x k coefficient block at the median of its non-DC entries.
// The DC term carries overall brightness, so it is zeroed before thresholding.
inline BinaryCode threshold_block(std::vector<double> block, std::uint32_t width_bits) {
  double peak = 0.0;
  for (double c : block) peak = std::max(peak, std::abs(c));
  const double tolerance = kCoefficientTolerance * peak;
  for (double& c : block) {
    if (std::abs(c) <= tolerance) c = 0.0;
  }
  std::vector<double> ac(block.begin() + 1, block.end());
  const std::size_t mid = ac.size() / 2;  // k*k - 1 is odd
  std::nth_element(ac.begin(), ac.begin() + static_cast<std::ptrdiff_t>(mid), ac.end());
  const double median = ac[mid];
  block[0] = 0.0;
  BinaryCode code(width_bits);
  for (std::uint32_t i = 0; i < block.size(); ++i) {
    if (block[i] > median + tolerance) code.set_bit(i, true);
  }
  return code;
}

// DCT perceptual hash generalized to k*k bits: resize to 4k x 4k, keep the
// k x k lowest frequencies, and set each bit where the coefficient exceeds
// the median.
inline BinaryCode phash(const GrayscaleImage& image, std::uint32_t width_bits) {
  const std::uint32_t k = phash_block_side(width_bits);
  image.validate();
  const std::uint32_t n = 4 * k;
  const GrayscaleImage resized =
      (image.width == n && image.height == n) ? image : resize_bilinear(image, n, n);
  return threshold_block(dct_low_block(resized, k), width_bits);
}

// Binary (P5) 8-bit portable graymap.
inline GrayscaleImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  auto next_token = [&]() {
    std::string tok;
    for (;;) {
      const int c = in.get();
      if (c == EOF) break;
      if (c == '#') {
        std::string ignored;
        std::getline(in, ignored);
        if (!tok.empty()) break;
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) break;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
    return tok;
  };
  if (next_token() != "P5") throw InputError(path.string() + ": not a binary PGM (P5)");
  GrayscaleImage img;
  long maxval = 0;
  try {
    img.width = static_cast<std::uint32_t>(std::stoul(next_token()));
    img.height = static_cast<std::uint32_t>(std::stoul(next_token()));
    maxval = std::stol(next_token());
  } catch (const std::exception&) {
    throw InputError(path.string() + ": malformed PGM header");
  }
  if (maxval <= 0 || maxval > 255) throw InputError(path.string() + ": only 8-bit PGM is supported");
  if (img.width == 0 || img.height == 0) throw InputError(path.string() + ": zero dimension");
  std::vector<unsigned char> raw(std::size_t{img.width} * img.height);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw InputError(path.string() + ": truncated pixel data");
  }
  img.pixels.assign(raw.begin(), raw.end());
  return img;
}

inline void write_pgm(const GrayscaleImage& img, const std::filesystem::path& path) {
  img.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  for (double p : img.pixels) {
    out.put(static_cast<char>(static_cast<unsigned char>(std::clamp(std::lround(p), 0L, 255L))));
  }
  if (!out) throw InputError("cannot write " + path.string());
}

// Hashes every *.pgm in `dir`, in file-name order, into one dataset.
inline CodeDataset phash_directory(const std::filesystem::path& dir, std::uint32_t width_bits,
                                   std::vector<std::filesystem::path>* order = nullptr) {
  phash_block_side(width_bits);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  CodeDataset ds(width_bits);
  ds.reserve(files.size());
  for (const auto& f : files) ds.push_back(phash(read_pgm(f), width_bits));
  if (order) *order = files;
  return ds;
}

}  // namespace hamming
