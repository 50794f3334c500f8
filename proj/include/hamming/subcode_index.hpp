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
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include "hamming/dataset.hpp"
#include "hamming/errors.hpp"
#include "hamming/io.hpp"
#include "hamming/query.hpp"
#include "hamming/subcode_format.hpp"
#include "hamming/varint.hpp"
#include "hamming/worker_pool.hpp"

namespace hamming {

inline constexpr std::uint32_t kDefaultSubWidth = 16;
inline constexpr std::uint32_t kDefaultShardCount = 5;

// Cap on the sparse term-index keys kept per shard, and the densest sampling
// allowed. Together they bound resident memory independently of code width.
inline constexpr std::size_t kMaxTermSamples = 4096;
inline constexpr std::uint32_t kMinTermInterval = 16;

// Forward-file reads: candidates closer than kCoalesceGap bytes share one
// read; no single read exceeds kMaxReadBytes.
inline constexpr std::size_t kCoalesceGap = 4096;
inline constexpr std::size_t kMaxReadBytes = 256 * 1024;

// Splits an m-bit code into s = m / sub_width sub-codes.
struct SubCodeGeometry {
  std::uint32_t width_bits = 0;
  std::uint32_t sub_width = kDefaultSubWidth;

  std::uint32_t subcode_count() const noexcept { return width_bits / sub_width; }

  // Pigeonhole bound: a code within distance r of the query agrees with it on
  // at least s - r sub-codes. Non-positive means the bound prunes nothing.
  std::int64_t min_should_match(std::uint32_t radius) const noexcept {
    return static_cast<std::int64_t>(subcode_count()) - radius;
  }

  bool filter_applies(std::uint32_t radius) const noexcept { return min_should_match(radius) >= 1; }

  friend bool operator==(const SubCodeGeometry&, const SubCodeGeometry&) = default;
};

inline SubCodeGeometry plan_geometry(std::uint32_t width_bits, std::uint32_t sub_width) {
  if (!is_supported_sub_width(sub_width)) {
    throw ConfigError("sub-code width must be one of 8, 16, 32, 64; got " +
                      std::to_string(sub_width));
  }
  if (width_bits == 0 || width_bits % sub_width != 0) {
    throw ConfigError("sub-code width " + std::to_string(sub_width) + " does not divide " +
                      std::to_string(width_bits) + " bits");
  }
  BinaryCode::checked_width(width_bits);
  if (width_bits / sub_width > 65535) {
    throw ConfigError("more than 65535 sub-code positions");
  }
  return {width_bits, sub_width};
}

struct ShardDescriptor {
  std::uint32_t shard = 0;
  std::uint32_t doc_count = 0;
  std::filesystem::path term_table_path;
  std::filesystem::path postings_path;
  std::filesystem::path forward_path;
  std::filesystem::path term_index_path;
  // global id = local * id_stride + id_base
  std::uint32_t id_base = 0;
  std::uint32_t id_stride = 1;

  DocId global_id(std::uint32_t local) const noexcept { return local * id_stride + id_base; }
};

struct SubCodeIndexManifest {
  SubCodeGeometry geometry;
  std::uint32_t shard_count = kDefaultShardCount;
  std::uint32_t dataset_count = 0;
  std::filesystem::path directory;
  std::vector<ShardDescriptor> shards;
};

struct Candidate {
  std::uint32_t local = 0;
  std::uint32_t matched = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// Shard-local documents that share at least `threshold` sub-codes with the
// query, in ascending local-id order.
struct CandidateSet {
  std::vector<Candidate> docs;
  std::uint32_t threshold = 0;

  std::size_t size() const noexcept { return docs.size(); }
  bool empty() const noexcept { return docs.empty(); }
};

namespace detail {

inline std::atomic<std::uint64_t>& build_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

inline SubCodeIndexManifest describe(const SubCodeGeometry& geometry, std::uint32_t shard_count,
                                     std::uint32_t dataset_count,
                                     const std::filesystem::path& dir) {
  SubCodeIndexManifest m;
  m.geometry = geometry;
  m.shard_count = shard_count;
  m.dataset_count = dataset_count;
  m.directory = dir;
  for (std::uint32_t k = 0; k < shard_count; ++k) {
    ShardDescriptor s;
    s.shard = k;
    s.doc_count = subcode_format::shard_doc_count(dataset_count, shard_count, k);
    s.forward_path = dir / subcode_format::shard_file(k, "fwd");
    s.term_table_path = dir / subcode_format::shard_file(k, "trm");
    s.postings_path = dir / subcode_format::shard_file(k, "pst");
    s.term_index_path = dir / subcode_format::shard_file(k, "tix");
    s.id_base = k;
    s.id_stride = shard_count;
    m.shards.push_back(std::move(s));
  }
  return m;
}

// Converts freshly read little-endian bytes to native words in place.
inline void words_from_le(std::span<Word> words) {
  if constexpr (std::endian::native != std::endian::little) {
    for (auto& w : words) w = io::load_le<Word>(reinterpret_cast<const std::byte*>(&w));
  }
}

inline void write_shard(const CodeDataset& dataset, const SubCodeGeometry& geometry,
                        const ShardDescriptor& shard) {
  using namespace subcode_format;
  const std::size_t wpc = dataset.words_per_code();
  const std::uint32_t positions = geometry.subcode_count();

  {
    io::File fwd = io::File::create(shard.forward_path);
    io::BufferedWriter out(fwd);
    std::vector<std::byte> bytes(wpc * 8);
    for (std::uint32_t local = 0; local < shard.doc_count; ++local) {
      encode_words_le(dataset.code_words(shard.global_id(local)), bytes.data());
      out.append(bytes.data(), bytes.size());
    }
    out.flush();
    fwd.sync();
  }

  io::File trm = io::File::create(shard.term_table_path);
  io::File pst = io::File::create(shard.postings_path);
  io::BufferedWriter trm_out(trm);
  io::BufferedWriter pst_out(pst);

  // Keys of every kMinTermInterval-th record; thinned to the budget at the end.
  std::vector<TermKey> dense_samples;
  std::uint64_t records = 0;

  std::vector<std::pair<std::uint64_t, std::uint32_t>> terms(shard.doc_count);
  std::vector<std::uint32_t> ids;
  std::vector<std::byte> encoded;
  std::array<std::byte, kTermRecordBytes> rec_bytes{};

  for (std::uint32_t p = 0; p < positions; ++p) {
    for (std::uint32_t local = 0; local < shard.doc_count; ++local) {
      terms[local] = {extract_subcode(dataset.code_words(shard.global_id(local)),
                                      geometry.sub_width, p),
                      local};
    }
    std::sort(terms.begin(), terms.end());
    for (std::size_t i = 0; i < terms.size();) {
      std::size_t j = i;
      ids.clear();
      while (j < terms.size() && terms[j].first == terms[i].first) ids.push_back(terms[j++].second);
      encoded.clear();
      varint::encode_postings(ids, encoded);

      TermRecord rec;
      rec.key = {static_cast<std::uint16_t>(p), terms[i].first};
      rec.postings_offset = pst_out.position();
      rec.postings_len_bytes = static_cast<std::uint32_t>(encoded.size());
      rec.doc_freq = static_cast<std::uint32_t>(ids.size());
      pst_out.append(encoded.data(), encoded.size());
      encode_record(rec, rec_bytes.data());
      trm_out.append(rec_bytes.data(), rec_bytes.size());
      if (records % kMinTermInterval == 0) dense_samples.push_back(rec.key);
      ++records;
      i = j;
    }
  }
  trm_out.flush();
  pst_out.flush();
  trm.sync();
  pst.sync();

  const std::size_t stride =
      std::max<std::size_t>(1, (dense_samples.size() + kMaxTermSamples - 1) / kMaxTermSamples);
  const auto interval = static_cast<std::uint32_t>(stride * kMinTermInterval);
  std::vector<TermKey> samples;
  for (std::size_t i = 0; i < dense_samples.size(); i += stride) samples.push_back(dense_samples[i]);

  io::File tix = io::File::create(shard.term_index_path);
  io::BufferedWriter tix_out(tix);
  tix_out.append(kTermIndexMagic.data(), 4);
  tix_out.put_le<std::uint32_t>(kVersion);
  tix_out.put_le<std::uint32_t>(interval);
  tix_out.put_le<std::uint32_t>(static_cast<std::uint32_t>(samples.size()));
  tix_out.put_le<std::uint64_t>(records);
  std::array<std::byte, kTermKeyBytes> key_bytes{};
  for (const auto& k : samples) {
    encode_key(k, key_bytes.data());
    tix_out.append(key_bytes.data(), key_bytes.size());
  }
  tix_out.flush();
  tix.sync();
}

inline void write_small_file(const std::filesystem::path& path, std::span<const std::byte> data) {
  io::File f = io::File::create(path);
  f.write_all(data);
  f.sync();
}

}  // namespace detail

// Number of subcode_build calls made by this process.
inline std::uint64_t subcode_build_invocations() { return detail::build_counter().load(); }

// Writes a complete sub-code index for `dataset` into `directory`. Any
// previous manifest is removed first and the COMPLETE marker is written
// last, so an interrupted build never looks openable.
inline SubCodeIndexManifest subcode_build(const CodeDataset& dataset,
                                          const SubCodeGeometry& geometry,
                                          std::uint32_t shard_count,
                                          const std::filesystem::path& directory) {
  namespace fs = std::filesystem;
  using namespace subcode_format;
  detail::build_counter().fetch_add(1);
  if (geometry.width_bits != dataset.width_bits()) {
    throw InputError("geometry width " + std::to_string(geometry.width_bits) +
                     " does not match dataset width " + std::to_string(dataset.width_bits()));
  }
  plan_geometry(geometry.width_bits, geometry.sub_width);
  if (shard_count == 0) throw ConfigError("shard count must be at least 1");
  if (dataset.count() > UINT32_MAX) throw InputError("dataset too large for a sub-code index");

  const auto count = static_cast<std::uint32_t>(dataset.count());
  SubCodeIndexManifest manifest = detail::describe(geometry, shard_count, count, directory);
  try {
    fs::create_directories(directory);
    fs::remove(directory / kCompleteFile);
    fs::remove(directory / kManifestFile);
    io::sync_directory(directory);

    for (const auto& shard : manifest.shards) detail::write_shard(dataset, geometry, shard);

    const auto header = encode_manifest({geometry.width_bits, geometry.sub_width, shard_count, count});
    detail::write_small_file(directory / kManifestFile, header);
    io::sync_directory(directory);
    detail::write_small_file(directory / kCompleteFile, {});
    io::sync_directory(directory);
  } catch (const std::system_error& e) {
    std::error_code ignored;
    fs::remove(directory / kCompleteFile, ignored);
    fs::remove(directory / kManifestFile, ignored);
    throw BuildError(std::string("sub-code index build failed: ") + e.what());
  }
  return manifest;
}

// A sub-code index opened for querying. Only the manifest and each shard's
// sparse term index live in memory; term records, postings and codes are
// read from disk per query.
class SubCodeIndex {
 public:
  SubCodeIndex(SubCodeIndex&&) noexcept = default;
  SubCodeIndex& operator=(SubCodeIndex&&) noexcept = default;

  static SubCodeIndex open(const std::filesystem::path& directory);

  const SubCodeIndexManifest& manifest() const noexcept { return manifest_; }
  const SubCodeGeometry& geometry() const noexcept { return manifest_.geometry; }
  std::uint32_t width_bits() const noexcept { return manifest_.geometry.width_bits; }
  std::size_t shard_count() const noexcept { return shards_.size(); }
  std::size_t count() const noexcept { return manifest_.dataset_count; }

  bool filter_bypassed(std::uint32_t radius) const noexcept {
    return !manifest_.geometry.filter_applies(radius);
  }

  // Bytes held in memory for navigation (sparse term keys), excluding fixed
  // per-object overhead.
  std::size_t term_index_bytes() const noexcept {
    std::size_t total = 0;
    for (const auto& s : shards_) total += s->samples.capacity() * sizeof(subcode_format::TermKey);
    return total;
  }

  // Looks up the term record for (position, value) in one shard.
  std::optional<subcode_format::TermRecord> lookup_term(std::size_t shard,
                                                        subcode_format::TermKey key) const {
    std::vector<std::byte> block;
    std::size_t cached = SIZE_MAX;
    return lookup(*shards_.at(shard), key, block, cached);
  }

  // Reads and decodes the postings list of one term record.
  std::vector<std::uint32_t> read_postings(std::size_t shard,
                                           const subcode_format::TermRecord& rec) const {
    std::vector<std::uint32_t> ids;
    std::vector<std::byte> buf;
    read_postings(*shards_.at(shard), rec, buf, ids);
    return ids;
  }

  // Phase one: merge the postings of the query's s terms and keep documents
  // matching at least s - r of them. Requires s - r >= 1.
  CandidateSet candidate_filter(std::size_t shard, const QuerySpec& spec) const {
    spec.validate(width_bits());
    if (!geometry().filter_applies(spec.radius)) {
      throw UsageError("candidate_filter: radius " + std::to_string(spec.radius) +
                       " leaves no pigeonhole bound for s = " +
                       std::to_string(geometry().subcode_count()));
    }
    return filter(*shards_.at(shard), spec);
  }

  // Phase two: exact distances for the candidates, read from the forward file
  // in ascending offset order. Returns global ids.
  NeighborSet verify(std::size_t shard, const CandidateSet& candidates,
                     const QuerySpec& spec) const {
    spec.validate(width_bits());
    std::vector<Neighbor> out;
    verify_candidates(*shards_.at(shard), candidates, spec, out);
    return NeighborSet(std::move(out));
  }

  // Exact distances for every document in the shard (filter bypass).
  NeighborSet verify_all(std::size_t shard, const QuerySpec& spec) const {
    spec.validate(width_bits());
    std::vector<Neighbor> out;
    verify_candidates(*shards_.at(shard), all_docs(*shards_.at(shard)), spec, out);
    return NeighborSet(std::move(out));
  }

  // Reads one stored code by global id.
  BinaryCode code(DocId id) const {
    if (id >= count()) {
      throw QueryError("document id " + std::to_string(id) + " out of range (count " +
                       std::to_string(count()) + ")");
    }
    const Shard& shard = *shards_[id % shards_.size()];
    const std::uint32_t local = id / static_cast<std::uint32_t>(shards_.size());
    std::vector<Word> words(bytes_per_code() / 8);
    const std::uint64_t offset = std::uint64_t{local} * bytes_per_code();
    if (!shard.forward.pread_exact(std::as_writable_bytes(std::span(words)), offset)) {
      throw QueryError("shard " + std::to_string(shard.desc.shard) +
                       ": short read in forward file at offset " + std::to_string(offset));
    }
    detail::words_from_le(words);
    return BinaryCode(width_bits(), words);
  }

  // Two-phase query fanned out over all shards. When s - r <= 0 the filter is
  // skipped and every shard is scanned from disk.
  NeighborSet range_search(const QuerySpec& spec) const {
    spec.validate(width_bits());
    const bool bypass = filter_bypassed(spec.radius);
    std::vector<std::vector<Neighbor>> partial(shards_.size());
    pool_->run(shards_.size(), [&](std::size_t k) {
      const Shard& shard = *shards_[k];
      if (bypass) {
        verify_candidates(shard, all_docs(shard), spec, partial[k]);
      } else {
        verify_candidates(shard, filter(shard, spec), spec, partial[k]);
      }
    });
    std::size_t total = 0;
    for (const auto& p : partial) total += p.size();
    std::vector<Neighbor> merged;
    merged.reserve(total);
    for (const auto& p : partial) merged.insert(merged.end(), p.begin(), p.end());
    return NeighborSet(std::move(merged));
  }

 private:
  struct Shard {
    ShardDescriptor desc;
    io::File forward;
    io::File terms;
    io::File postings;
    std::vector<subcode_format::TermKey> samples;
    std::uint32_t interval = 0;
    std::uint64_t records = 0;
  };

  SubCodeIndex() = default;

  std::size_t bytes_per_code() const noexcept { return width_bits() / 8; }

  std::optional<subcode_format::TermRecord> lookup(const Shard& shard,
                                                   const subcode_format::TermKey& key,
                                                   std::vector<std::byte>& block,
                                                   std::size_t& cached_block) const {
    using namespace subcode_format;
    auto it = std::upper_bound(shard.samples.begin(), shard.samples.end(), key);
    if (it == shard.samples.begin()) return std::nullopt;
    const auto b = static_cast<std::size_t>(it - shard.samples.begin()) - 1;
    const std::uint64_t first = std::uint64_t{b} * shard.interval;
    const std::uint64_t n = std::min<std::uint64_t>(shard.interval, shard.records - first);
    if (b != cached_block) {
      block.resize(n * kTermRecordBytes);
      if (!shard.terms.pread_exact(block, first * kTermRecordBytes)) {
        throw QueryError("shard " + std::to_string(shard.desc.shard) +
                         ": short read in term table at offset " +
                         std::to_string(first * kTermRecordBytes));
      }
      cached_block = b;
    }
    std::size_t lo = 0, hi = n;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (decode_key(block.data() + mid * kTermRecordBytes) < key) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo == n) return std::nullopt;
    const TermRecord rec = decode_record(block.data() + lo * kTermRecordBytes);
    if (rec.key != key) return std::nullopt;
    return rec;
  }

  void read_postings(const Shard& shard, const subcode_format::TermRecord& rec,
                     std::vector<std::byte>& buf, std::vector<std::uint32_t>& ids) const {
    buf.resize(rec.postings_len_bytes);
    if (!shard.postings.pread_exact(buf, rec.postings_offset)) {
      throw QueryError("shard " + std::to_string(shard.desc.shard) +
                       ": short read in postings at offset " +
                       std::to_string(rec.postings_offset));
    }
    varint::decode_postings(buf, rec.doc_freq, ids);
  }

  CandidateSet filter(const Shard& shard, const QuerySpec& spec) const {
    const auto& g = geometry();
    const std::uint32_t s = g.subcode_count();
    CandidateSet out;
    out.threshold = static_cast<std::uint32_t>(g.min_should_match(spec.radius));
    if (shard.desc.doc_count == 0) return out;

    // All postings decoded back to back.
    std::vector<std::uint32_t> ids;
    std::uint32_t lists = 0;
    std::vector<std::byte> block, buf;
    std::size_t cached = SIZE_MAX;
    for (std::uint32_t p = 0; p < s; ++p) {
      const subcode_format::TermKey key{static_cast<std::uint16_t>(p),
                                        extract_subcode(spec.query.words(), g.sub_width, p)};
      auto rec = lookup(shard, key, block, cached);
      // Remaining positions can no longer lift any document to the threshold.
      if (!rec) {
        if (lists + (s - p - 1) < out.threshold) break;
        continue;
      }
      read_postings(shard, *rec, buf, ids);
      ++lists;
    }
    if (lists < out.threshold) return out;
    merge_counts(ids, shard.desc.doc_count, out);
    return out;
  }

  // Counts, per document, how many of the query's postings lists contain it,
  // using a per-thread counter array that is cleared again on exit. Documents
  // are recorded the moment their count reaches the threshold.
  static void merge_counts(std::span<const std::uint32_t> ids, std::uint32_t doc_count,
                           CandidateSet& out) {
    if (ids.empty()) return;
    thread_local std::vector<std::uint16_t> counts;
    if (counts.size() < doc_count) counts.resize(doc_count, 0);
    std::size_t touched = 0;
    struct Reset {
      std::span<const std::uint32_t> ids;
      std::size_t& touched;
      ~Reset() {
        for (std::size_t i = 0; i < touched; ++i) counts[ids[i]] = 0;
      }
    } reset{ids, touched};

    std::vector<std::uint32_t> hits;
    for (; touched < ids.size(); ++touched) {
      const std::uint32_t id = ids[touched];
      if (id >= doc_count) throw QueryError("postings id beyond shard size");
      if (++counts[id] == out.threshold) hits.push_back(id);
    }
    if (hits.size() * 32 < doc_count) {
      std::sort(hits.begin(), hits.end());
      out.docs.reserve(hits.size());
      for (std::uint32_t id : hits) out.docs.push_back({id, counts[id]});
    } else {
      out.docs.reserve(hits.size());
      for (std::uint32_t id = 0; id < doc_count; ++id) {
        if (counts[id] >= out.threshold) out.docs.push_back({id, counts[id]});
      }
    }
  }

  static CandidateSet all_docs(const Shard& shard) {
    CandidateSet all;
    all.docs.resize(shard.desc.doc_count);
    for (std::uint32_t id = 0; id < shard.desc.doc_count; ++id) all.docs[id] = {id, 0};
    return all;
  }

  void verify_candidates(const Shard& shard, const CandidateSet& candidates, const QuerySpec& spec,
                         std::vector<Neighbor>& out) const {
    const auto& docs = candidates.docs;
    const std::size_t bpc = bytes_per_code();
    const std::size_t wpc = bpc / 8;
    const Word* q = spec.query.words().data();
    std::vector<Word> buf;
    for (std::size_t i = 0; i < docs.size();) {
      if (docs[i].local >= shard.desc.doc_count) {
        throw QueryError("shard " + std::to_string(shard.desc.shard) + ": candidate " +
                         std::to_string(docs[i].local) + " beyond forward file");
      }
      const std::uint64_t first = docs[i].local;
      std::size_t j = i + 1;
      while (j < docs.size() && docs[j].local < shard.desc.doc_count &&
             (std::uint64_t{docs[j].local} - docs[j - 1].local - 1) * bpc <= kCoalesceGap &&
             (std::uint64_t{docs[j].local} - first + 1) * bpc <= kMaxReadBytes) {
        ++j;
      }
      const std::uint64_t span_codes = std::uint64_t{docs[j - 1].local} - first + 1;
      buf.resize(span_codes * wpc);
      const std::uint64_t offset = first * bpc;
      if (!shard.forward.pread_exact(std::as_writable_bytes(std::span(buf)), offset)) {
        throw QueryError("shard " + std::to_string(shard.desc.shard) +
                         ": short read in forward file at offset " + std::to_string(offset));
      }
      detail::words_from_le(buf);
      for (std::size_t t = i; t < j; ++t) {
        const Word* code = buf.data() + (docs[t].local - first) * wpc;
        const auto d = hamming_words(code, q, wpc);
        if (d <= spec.radius) out.push_back({shard.desc.global_id(docs[t].local), d});
      }
      i = j;
    }
  }

  SubCodeIndexManifest manifest_;
  std::vector<std::unique_ptr<Shard>> shards_;
  std::unique_ptr<WorkerPool> pool_;
};

inline SubCodeIndex SubCodeIndex::open(const std::filesystem::path& directory) {
  namespace fs = std::filesystem;
  using namespace subcode_format;

  const fs::path manifest_path = directory / kManifestFile;
  if (!fs::exists(manifest_path)) throw OpenError(OpenErrc::missing_manifest, manifest_path.string());
  if (!fs::exists(directory / kCompleteFile)) {
    throw OpenError(OpenErrc::incomplete_build, "no COMPLETE marker in " + directory.string());
  }

  std::array<std::byte, kManifestBytes> raw{};
  {
    io::File f = io::File::open_read(manifest_path);
    if (f.size() != kManifestBytes || !f.pread_exact(raw, 0)) {
      throw OpenError(OpenErrc::corrupt_manifest, "manifest must be 24 bytes");
    }
  }
  if (std::memcmp(raw.data(), kManifestMagic.data(), 4) != 0) {
    throw OpenError(OpenErrc::corrupt_manifest, "magic mismatch");
  }
  const auto version = io::load_le<std::uint32_t>(raw.data() + 4);
  if (version != kVersion) {
    throw OpenError(OpenErrc::version_mismatch, "manifest version " + std::to_string(version));
  }
  const ManifestHeader header{io::load_le<std::uint32_t>(raw.data() + 8),
                              io::load_le<std::uint32_t>(raw.data() + 12),
                              io::load_le<std::uint32_t>(raw.data() + 16),
                              io::load_le<std::uint32_t>(raw.data() + 20)};
  SubCodeGeometry geometry;
  try {
    geometry = plan_geometry(header.width_bits, header.sub_width);
  } catch (const ConfigError& e) {
    throw OpenError(OpenErrc::corrupt_manifest, e.what());
  }
  if (header.shard_count == 0) throw OpenError(OpenErrc::corrupt_manifest, "zero shards");

  SubCodeIndex index;
  index.manifest_ = detail::describe(geometry, header.shard_count, header.dataset_count, directory);
  const std::size_t bpc = geometry.width_bits / 8;

  auto open_file = [](const fs::path& p) {
    if (!fs::exists(p)) throw OpenError(OpenErrc::missing_file, p.string());
    return io::File::open_read(p);
  };

  for (const auto& desc : index.manifest_.shards) {
    auto shard = std::make_unique<Shard>();
    shard->desc = desc;
    shard->forward = open_file(desc.forward_path);
    shard->terms = open_file(desc.term_table_path);
    shard->postings = open_file(desc.postings_path);
    io::File tix = open_file(desc.term_index_path);

    if (shard->forward.size() != std::uint64_t{desc.doc_count} * bpc) {
      throw OpenError(OpenErrc::truncated_file, desc.forward_path.string() + " has " +
                                                    std::to_string(shard->forward.size()) +
                                                    " bytes, expected " +
                                                    std::to_string(std::uint64_t{desc.doc_count} * bpc));
    }
    const std::uint64_t trm_size = shard->terms.size();
    if (trm_size % kTermRecordBytes != 0) {
      throw OpenError(OpenErrc::truncated_file, desc.term_table_path.string());
    }
    shard->records = trm_size / kTermRecordBytes;

    std::vector<std::byte> tix_bytes(tix.size());
    if (tix_bytes.size() < kTermIndexHeaderBytes || !tix.pread_exact(tix_bytes, 0)) {
      throw OpenError(OpenErrc::truncated_file, desc.term_index_path.string());
    }
    if (std::memcmp(tix_bytes.data(), kTermIndexMagic.data(), 4) != 0 ||
        io::load_le<std::uint32_t>(tix_bytes.data() + 4) != kVersion) {
      throw OpenError(OpenErrc::corrupt_file, desc.term_index_path.string());
    }
    shard->interval = io::load_le<std::uint32_t>(tix_bytes.data() + 8);
    const auto samples = io::load_le<std::uint32_t>(tix_bytes.data() + 12);
    const auto records = io::load_le<std::uint64_t>(tix_bytes.data() + 16);
    if (records != shard->records) {
      throw OpenError(OpenErrc::truncated_file,
                      desc.term_table_path.string() + " holds " + std::to_string(shard->records) +
                          " records, term index expects " + std::to_string(records));
    }
    if (tix_bytes.size() != kTermIndexHeaderBytes + std::size_t{samples} * kTermKeyBytes ||
        shard->interval == 0 ||
        samples != (records + shard->interval - 1) / shard->interval) {
      throw OpenError(OpenErrc::corrupt_file, desc.term_index_path.string());
    }
    shard->samples.reserve(samples);
    for (std::uint32_t i = 0; i < samples; ++i) {
      shard->samples.push_back(
          decode_key(tix_bytes.data() + kTermIndexHeaderBytes + std::size_t{i} * kTermKeyBytes));
    }

    // The last term record must point inside the postings file.
    if (shard->records > 0) {
      std::array<std::byte, kTermRecordBytes> last{};
      if (!shard->terms.pread_exact(last, (shard->records - 1) * kTermRecordBytes)) {
        throw OpenError(OpenErrc::truncated_file, desc.term_table_path.string());
      }
      const TermRecord rec = decode_record(last.data());
      if (rec.postings_offset + rec.postings_len_bytes != shard->postings.size()) {
        throw OpenError(OpenErrc::truncated_file, desc.postings_path.string());
      }
    } else if (shard->postings.size() != 0) {
      throw OpenError(OpenErrc::corrupt_file, desc.postings_path.string());
    }
    index.shards_.push_back(std::move(shard));
  }
  index.pool_ = std::make_unique<WorkerPool>(header.shard_count);
  return index;
}

inline SubCodeIndex subcode_open(const std::filesystem::path& directory) {
  return SubCodeIndex::open(directory);
}

inline NeighborSet subcode_range_search(const SubCodeIndex& index, const QuerySpec& spec) {
  return index.range_search(spec);
}

}  // namespace hamming
