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

#include <spawn.h>
#include <sys/wait.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamming/bench/config.hpp"
#include "hamming/bench/report.hpp"
#include "hamming/bench/resident.hpp"
#include "hamming/bench/stats.hpp"
#include "hamming/datagen.hpp"
#include "hamming/dataset.hpp"
#include "hamming/flat_index.hpp"
#include "hamming/oracle.hpp"
#include "hamming/subcode_index.hpp"

extern char** environ;

namespace hamming::bench {

inline constexpr const char* kWorkerCommand = "bench-worker";

// ---------------------------------------------------------------------------
// Timing
// ---------------------------------------------------------------------------

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}

  double seconds() const {
    const auto d = std::chrono::steady_clock::now() - start_;
    if (d.count() < 0) throw Error("monotonic clock went backwards");
    return std::chrono::duration<double>(d).count();
  }

  double milliseconds() const { return seconds() * 1e3; }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct BuildOptions {
  std::size_t workers = kDefaultFlatWorkers;
  std::uint32_t shard_count = kDefaultShardCount;
  std::uint32_t sub_width = kDefaultSubWidth;
  std::filesystem::path index_dir;  // sub-code backend only
};

// Wall-clock seconds from build start to a queryable index. The sub-code
// figure covers every file write and the completion marker.
inline double measure_build(Backend backend, const CodeDataset& dataset,
                            const BuildOptions& options = {}) {
  Stopwatch watch;
  if (backend == Backend::flat) {
    auto index = FlatIndex::build(dataset, options.workers);
    return watch.seconds();
  }
  if (options.index_dir.empty()) throw ConfigError("sub-code build needs an index directory");
  subcode_build(dataset, plan_geometry(dataset.width_bits(), options.sub_width),
                options.shard_count, options.index_dir);
  return watch.seconds();
}

using SearchFn = std::function<NeighborSet(const QuerySpec&)>;

// Runs queries[begin, end) sequentially and appends per-query milliseconds.
// Result assembly is part of the timed region.
inline void time_queries(const SearchFn& search, std::span<const QuerySpec> queries,
                         std::size_t begin, std::size_t end, std::vector<double>& samples_ms,
                         std::size_t* result_total = nullptr) {
  for (std::size_t i = begin; i < end; ++i) {
    try {
      Stopwatch watch;
      const NeighborSet result = search(queries[i]);
      samples_ms.push_back(watch.milliseconds());
      if (result_total) *result_total += result.size();
    } catch (const std::exception& e) {
      throw QueryError("query " + std::to_string(i) + " (radius " +
                       std::to_string(queries[i].radius) + "): " + e.what());
    }
  }
}

inline LatencyStats measure_latency(const SearchFn& search, std::span<const QuerySpec> queries) {
  if (queries.empty()) throw QueryError("empty query set");
  std::vector<double> samples;
  samples.reserve(queries.size());
  time_queries(search, queries, 0, queries.size(), samples);
  return summarize(std::move(samples));
}

// ---------------------------------------------------------------------------
// Equivalence
// ---------------------------------------------------------------------------

struct EquivalenceFailure {
  std::size_t query_index = 0;
  std::uint32_t radius = 0;
  std::string pair;  // which two answers disagreed
  std::vector<DocId> symmetric_difference;
};

struct EquivalenceSummary {
  std::size_t checks = 0;
  std::vector<EquivalenceFailure> failures;

  bool passed() const noexcept { return failures.empty(); }

  std::string describe() const {
    if (passed()) return "pass (" + std::to_string(checks) + " checks)";
    const auto& f = failures.front();
    std::string ids;
    for (std::size_t i = 0; i < f.symmetric_difference.size() && i < 8; ++i) {
      if (i) ids += ",";
      ids += std::to_string(f.symmetric_difference[i]);
    }
    if (f.symmetric_difference.size() > 8) ids += ",...";
    return std::to_string(failures.size()) + " of " + std::to_string(checks) +
           " checks failed; first: query " + std::to_string(f.query_index) + " radius " +
           std::to_string(f.radius) + " " + f.pair + " differ on ids {" + ids + "}";
  }
};

// Distinct ids present in only one of the two sets, or present in both with
// different distances.
inline std::vector<DocId> result_difference(const NeighborSet& a, const NeighborSet& b) {
  std::vector<DocId> ids = symmetric_difference_ids(a, b);
  const auto sa = a.sorted().entries();
  const auto sb = b.sorted().entries();
  std::map<DocId, std::uint32_t> da;
  for (const auto& n : sa) da[n.id] = n.distance;
  for (const auto& n : sb) {
    auto it = da.find(n.id);
    if (it != da.end() && it->second != n.distance) ids.push_back(n.id);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

struct EquivalenceOptions {
  // Drops one entry from the first sub-code answer to exercise the gate.
  bool inject_fault = false;
};

// Flat, sub-code and brute-force oracle answers for every query x radius.
inline EquivalenceSummary verify_equivalence(const CodeDataset& dataset, const FlatIndex& flat,
                                             const SubCodeIndex& subcode,
                                             std::span<const BinaryCode> queries,
                                             std::span<const std::uint32_t> radii,
                                             const EquivalenceOptions& options = {}) {
  EquivalenceSummary summary;
  bool injected = false;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    for (auto r : radii) {
      const QuerySpec spec{queries[qi], r};
      const NeighborSet expected = range_search_oracle(dataset, spec);
      const NeighborSet f = flat.range_search(spec);
      NeighborSet s = subcode.range_search(spec);
      if (options.inject_fault && !injected && !s.empty()) {
        s.entries().pop_back();
        injected = true;
      }
      ++summary.checks;
      auto check = [&](const NeighborSet& got, const char* pair) {
        if (same_set(expected, got)) return true;
        summary.failures.push_back({qi, r, pair, result_difference(expected, got)});
        return false;
      };
      if (check(f, "oracle/flat")) check(s, "oracle/subcode");
    }
  }
  return summary;
}

// FNV-1a over the id-sorted answers; equal digests mean equal result sets.
class ResultDigest {
 public:
  void add(const NeighborSet& result) {
    const NeighborSet sorted = result.sorted();
    for (const auto& n : sorted.entries()) {
      mix(n.id);
      mix(n.distance);
    }
    mix(0xffffffffu);
  }

  std::uint64_t value() const noexcept { return h_; }

 private:
  void mix(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
      h_ ^= (v >> (8 * i)) & 0xffu;
      h_ *= 0x100000001b3ULL;
    }
  }

  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

// ---------------------------------------------------------------------------
// Worker processes
// ---------------------------------------------------------------------------

// Arguments understood by the hidden worker subcommand, passed as
// "--key value" pairs.
struct WorkerJob {
  std::string mode;  // warm, cold, restart
  Backend backend = Backend::flat;
  std::filesystem::path dataset;
  std::filesystem::path queries;
  std::filesystem::path index_dir;
  std::filesystem::path result;
  std::vector<std::uint32_t> radii;
  std::size_t measured = 0;
  std::size_t warmup = 0;
  std::size_t workers = kDefaultFlatWorkers;

  std::vector<std::string> to_args() const {
    return {"--mode",     mode,
            "--backend",  to_string(backend),
            "--dataset",  dataset.string(),
            "--queries",  queries.string(),
            "--index",    index_dir.string(),
            "--result",   result.string(),
            "--radii",    detail::join(radii),
            "--measured", std::to_string(measured),
            "--warmup",   std::to_string(warmup),
            "--workers",  std::to_string(workers)};
  }

  static WorkerJob from_args(const std::vector<std::string>& args) {
    std::map<std::string, std::string> kv;
    for (std::size_t i = 0; i + 1 < args.size(); i += 2) {
      if (args[i].rfind("--", 0) != 0) throw UsageError("bench-worker: bad argument " + args[i]);
      kv[args[i].substr(2)] = args[i + 1];
    }
    if (args.size() % 2 != 0) throw UsageError("bench-worker: dangling argument");
    auto get = [&](const std::string& k) {
      auto it = kv.find(k);
      if (it == kv.end()) throw UsageError("bench-worker: missing --" + k);
      return it->second;
    };
    WorkerJob job;
    job.mode = get("mode");
    job.backend = parse_backend(get("backend"));
    job.dataset = get("dataset");
    job.queries = get("queries");
    job.index_dir = get("index");
    job.result = get("result");
    job.radii = detail::parse_uint_list("radii", get("radii"));
    job.measured = detail::parse_uint("measured", get("measured"));
    job.warmup = detail::parse_uint("warmup", get("warmup"));
    job.workers = detail::parse_uint("workers", get("workers"));
    return job;
  }
};

namespace detail {

struct LoadedBackend {
  std::optional<FlatIndex> flat;
  std::optional<SubCodeIndex> subcode;
  double setup_seconds = 0.0;

  NeighborSet search(const QuerySpec& spec) const {
    return flat ? flat->range_search(spec) : subcode->range_search(spec);
  }
};

// Flat: load the dataset, build, drop the dataset copy. Sub-code: open.
inline LoadedBackend load_backend(const WorkerJob& job) {
  LoadedBackend b;
  if (job.backend == Backend::flat) {
    CodeDataset ds = dataset_load(job.dataset);
    Stopwatch watch;
    b.flat.emplace(FlatIndex::build(ds, job.workers));
    b.setup_seconds = watch.seconds();
  } else {
    Stopwatch watch;
    b.subcode.emplace(SubCodeIndex::open(job.index_dir));
    b.setup_seconds = watch.seconds();
  }
  return b;
}

inline std::vector<QuerySpec> make_specs(const CodeDataset& codes, std::size_t n,
                                         std::uint32_t radius) {
  std::vector<QuerySpec> specs;
  n = std::min(n, codes.count());
  specs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) specs.push_back({codes.code(static_cast<DocId>(i)), radius});
  return specs;
}

inline nlohmann::json stats_json(const LatencyStats& s) {
  return {{"count", s.count}, {"mean_ms", s.mean_ms}, {"p50_ms", s.p50_ms}, {"p95_ms", s.p95_ms}};
}

inline nlohmann::json run_worker(const WorkerJob& job) {
  const CodeDataset queries = dataset_load(job.queries);
  nlohmann::json out;
  out["mode"] = job.mode;
  out["backend"] = to_string(job.backend);

  if (job.mode == "restart") {
    const auto before = subcode_build_invocations();
    LoadedBackend b = load_backend(job);
    out["setup_seconds"] = b.setup_seconds;
    ResultDigest digest;
    for (const auto& spec : make_specs(queries, job.measured, job.radii.at(0))) {
      digest.add(b.search(spec));
    }
    out["digest"] = std::to_string(digest.value());
    out["build_invocations"] = subcode_build_invocations() - before;
    return out;
  }

  if (job.mode != "warm" && job.mode != "cold") {
    throw UsageError("bench-worker: unknown mode " + job.mode);
  }
  const bool warm = job.mode == "warm";
  LoadedBackend b = load_backend(job);
  out["setup_seconds"] = b.setup_seconds;
  const SearchFn search = [&b](const QuerySpec& spec) { return b.search(spec); };

  std::vector<std::vector<QuerySpec>> specs;
  for (auto r : job.radii) specs.push_back(make_specs(queries, job.measured, r));
  for (const auto& s : specs) {
    if (s.empty()) throw QueryError("empty query set");
  }

  ResidentSampler sampler;
  if (warm) {
    // Warm-up pass per radius, excluded from the statistics.
    for (std::size_t ri = 0; ri < job.radii.size(); ++ri) {
      std::vector<double> discard;
      sampler.set_phase(ri);
      time_queries(search, specs[ri], 0, std::min(job.warmup, specs[ri].size()), discard);
    }
  }
  // Radii are interleaved in rounds so slow drift in machine state spreads
  // evenly over them.
  const std::size_t n = specs.front().size();
  const std::size_t rounds = warm ? std::min<std::size_t>(10, n) : 1;
  std::vector<std::vector<double>> samples(job.radii.size());
  std::vector<std::size_t> totals(job.radii.size(), 0);
  for (std::size_t round = 0; round < rounds; ++round) {
    const std::size_t begin = n * round / rounds, end = n * (round + 1) / rounds;
    for (std::size_t ri = 0; ri < job.radii.size(); ++ri) {
      sampler.set_phase(ri);
      time_queries(search, specs[ri], begin, end, samples[ri], &totals[ri]);
      sampler.sample();
    }
  }
  sampler.stop();

  out["rss_available"] = sampler.available();
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t ri = 0; ri < job.radii.size(); ++ri) {
    nlohmann::json run = stats_json(summarize(samples[ri]));
    run["radius"] = job.radii[ri];
    run["results"] = totals[ri];
    run["bypass"] = b.subcode ? b.subcode->filter_bypassed(job.radii[ri]) : false;
    if (auto p = sampler.phase_peak(ri)) run["rss_peak"] = *p;
    runs.push_back(run);
  }
  out["runs"] = runs;
  return out;
}

}  // namespace detail

// Entry point of the hidden worker subcommand. Writes a JSON result file and
// returns a process exit code.
inline int worker_main(const std::vector<std::string>& args) {
  WorkerJob job;
  try {
    job = WorkerJob::from_args(args);
  } catch (const std::exception& e) {
    std::cerr << "bench-worker: " << e.what() << "\n";
    return 1;
  }
  nlohmann::json out;
  int code = 0;
  try {
    out = detail::run_worker(job);
  } catch (const std::exception& e) {
    out = {{"error", e.what()}};
    code = 2;
  }
  std::ofstream f(job.result);
  f << out.dump(1) << "\n";
  if (!f) return 2;
  return code;
}

// Dispatches argv[1] == "bench-worker"; returns nullopt for ordinary runs.
inline std::optional<int> maybe_run_worker(int argc, char** argv) {
  if (argc < 2 || std::string(argv[1]) != kWorkerCommand) return std::nullopt;
  return worker_main(std::vector<std::string>(argv + 2, argv + argc));
}

// Runs a job in a fresh process and parses its JSON result.
inline nlohmann::json spawn_worker(const std::filesystem::path& executable, const WorkerJob& job) {
  std::vector<std::string> args = {executable.string(), kWorkerCommand};
  for (auto& a : job.to_args()) args.push_back(a);
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  std::error_code ec;
  std::filesystem::remove(job.result, ec);

  pid_t pid = 0;
  if (int rc = ::posix_spawn(&pid, executable.c_str(), nullptr, nullptr, argv.data(), environ);
      rc != 0) {
    throw Error("cannot start worker " + executable.string() + ": " + std::strerror(rc));
  }
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error("waitpid failed: " + std::string(std::strerror(errno)));
  }
  nlohmann::json out;
  std::ifstream in(job.result);
  if (in) {
    try {
      in >> out;
    } catch (const nlohmann::json::exception&) {
      out = nullptr;
    }
  }
  if (out.is_object() && out.contains("error")) {
    throw Error("worker (" + job.mode + " " + to_string(job.backend) +
                "): " + out["error"].get<std::string>());
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0 || !out.is_object()) {
    throw Error("worker (" + job.mode + " " + to_string(job.backend) + ") failed with status " +
                std::to_string(status));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

// Query ids sampled without replacement from the dataset, in random order.
inline std::vector<DocId> sample_query_ids(std::size_t dataset_count, std::size_t n,
                                           std::uint64_t seed) {
  std::vector<DocId> all(dataset_count);
  std::iota(all.begin(), all.end(), DocId{0});
  std::vector<DocId> picked;
  picked.reserve(n);
  std::mt19937_64 rng(hamming::detail::mix_seed(seed, 0, 0x5157));
  std::sample(all.begin(), all.end(), std::back_inserter(picked), n, rng);
  std::shuffle(picked.begin(), picked.end(), rng);
  return picked;
}

namespace detail {

inline void log(std::ostream* out, const std::string& msg) {
  if (out) *out << "[bench] " << msg << std::endl;
}

// Radii for the gate: the configured grid plus both sides of the filter
// bypass boundary.
inline std::vector<std::uint32_t> gate_radii(const BenchConfig& config, std::uint32_t m) {
  auto radii = config.radii_for(m);
  const auto s = plan_geometry(m, config.sub_width).subcode_count();
  if (s >= 1 && s - 1 <= m) radii.push_back(s - 1);
  if (s <= m) radii.push_back(s);
  radii.push_back(0);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

inline void fill_from_run(BenchRow& row, const nlohmann::json& run, bool rss_available) {
  row.latency = LatencyStats{run.at("count").get<std::size_t>(), run.at("mean_ms").get<double>(),
                             run.at("p50_ms").get<double>(), run.at("p95_ms").get<double>()};
  row.filter_bypass = run.at("bypass").get<bool>();
  row.rss_available = rss_available;
  if (run.contains("rss_peak")) row.resident_bytes_peak = run["rss_peak"].get<std::uint64_t>();
}

inline void run_width(const BenchConfig& config, std::uint32_t m, BenchReport& report,
                      std::ostream* progress) {
  namespace fs = std::filesystem;
  const auto radii = config.radii_for(m);
  const fs::path dir = config.effective_work_dir() / ("m" + std::to_string(m));

  // Rows are created up front so every configured cell appears even when the
  // width fails part-way.
  const std::size_t first_row = report.rows.size();
  for (Backend b : {Backend::flat, Backend::subcode}) {
    for (auto r : radii) {
      for (Condition c : {Condition::warm, Condition::cold}) {
        BenchRow row;
        row.backend = b;
        row.width_bits = m;
        row.radius = r;
        row.condition = c;
        row.filter_bypass =
            b == Backend::subcode && !plan_geometry(m, config.sub_width).filter_applies(r);
        row.status = "error: not run";
        report.rows.push_back(row);
      }
    }
  }
  auto rows_of = [&](std::optional<Backend> b) {
    std::vector<BenchRow*> out;
    for (std::size_t i = first_row; i < report.rows.size(); ++i) {
      if (!b || report.rows[i].backend == *b) out.push_back(&report.rows[i]);
    }
    return out;
  };
  auto row_at = [&](Backend b, std::uint32_t r, Condition c) -> BenchRow& {
    for (auto* row : rows_of(b)) {
      if (row->radius == r && row->condition == c) return *row;
    }
    throw Error("internal: missing report row");
  };

  EquivalenceRecord eq;
  eq.width_bits = m;
  RestartRecord restart;
  restart.width_bits = m;
  restart.status = "error: not run";

  try {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path dataset_path = dir / "dataset.hds";
    const fs::path queries_path = dir / "queries.hds";
    const fs::path index_dir = dir / "subcode";

    log(progress, "m=" + std::to_string(m) + ": generating " +
                      std::to_string(config.dataset_count) + " codes");
    SyntheticSpec gen{config.dataset_count, m, config.seed + m, config.cluster_count,
                      config.flip_probability};
    CodeDataset dataset = gen_synthetic(gen);
    dataset_save(dataset, dataset_path);
    CodeDataset queries(m);
    const auto ids =
        sample_query_ids(dataset.count(), config.effective_query_count(), config.seed + m);
    queries.reserve(ids.size());
    for (auto id : ids) queries.push_back(dataset.code(id));
    dataset_save(queries, queries_path);

    log(progress, "m=" + std::to_string(m) + ": building indexes");
    Stopwatch flat_watch;
    FlatIndex flat = FlatIndex::build(dataset, config.workers);
    const double flat_build = flat_watch.seconds();
    const double subcode_build_s =
        measure_build(Backend::subcode, dataset,
                      {config.workers, config.shard_count, config.sub_width, index_dir});
    for (auto* row : rows_of(Backend::flat)) row->build_seconds = flat_build;
    for (auto* row : rows_of(Backend::subcode)) row->build_seconds = subcode_build_s;
    const SubCodeIndex subcode = SubCodeIndex::open(index_dir);

    log(progress, "m=" + std::to_string(m) + ": equivalence gate");
    std::vector<BinaryCode> gate;
    const std::size_t gate_n = std::min(config.gate_query_count, queries.count());
    for (std::size_t i = 0; i < gate_n; ++i) gate.push_back(queries.code(static_cast<DocId>(i)));
    eq.radii = gate_radii(config, m);
    eq.queries = gate.size();
    const auto summary =
        verify_equivalence(dataset, flat, subcode, gate, eq.radii, {config.inject_fault});
    eq.passed = summary.passed();
    eq.detail = summary.describe();

    // Reference digest for the restart check, from the in-process index.
    ResultDigest reference;
    for (const auto& q : gate) reference.add(subcode.range_search({q, radii.front()}));

    dataset = CodeDataset(m);
    { FlatIndex drop = std::move(flat); }

    if (!eq.passed) {
      for (auto* row : rows_of(std::nullopt)) row->status = kStatusEquivalenceFailed;
      report.notes.push_back("m=" + std::to_string(m) +
                             ": equivalence gate failed, latency runs skipped: " + eq.detail);
      log(progress, "m=" + std::to_string(m) + ": equivalence gate FAILED: " + eq.detail);
    } else {
      for (Backend b : {Backend::flat, Backend::subcode}) {
        WorkerJob job;
        job.backend = b;
        job.dataset = dataset_path;
        job.queries = queries_path;
        job.index_dir = index_dir;
        job.workers = config.workers;
        job.radii = radii;

        log(progress, "m=" + std::to_string(m) + ": warm " + to_string(b));
        job.mode = "warm";
        job.result = dir / (std::string("warm-") + to_string(b) + ".json");
        job.measured = config.effective_query_count();
        job.warmup = config.warmup_query_count;
        try {
          const auto out = spawn_worker(config.worker_executable, job);
          const bool rss = out.at("rss_available").get<bool>();
          for (const auto& run : out.at("runs")) {
            BenchRow& row = row_at(b, run.at("radius").get<std::uint32_t>(), Condition::warm);
            fill_from_run(row, run, rss);
            row.status = kStatusOk;
          }
        } catch (const std::exception& e) {
          for (auto r : radii) row_at(b, r, Condition::warm).status = std::string("error: ") + e.what();
        }

        log(progress, "m=" + std::to_string(m) + ": cold " + to_string(b));
        job.mode = "cold";
        job.measured = config.cold_query_count;
        job.warmup = 0;
        for (auto r : radii) {
          job.radii = {r};
          job.result = dir / ("cold-" + std::string(to_string(b)) + "-" + std::to_string(r) + ".json");
          BenchRow& row = row_at(b, r, Condition::cold);
          try {
            const auto out = spawn_worker(config.worker_executable, job);
            fill_from_run(row, out.at("runs").at(0), out.at("rss_available").get<bool>());
            row.status = kStatusOk;
          } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
          }
        }
      }
    }

    log(progress, "m=" + std::to_string(m) + ": restart check");
    try {
      WorkerJob job;
      job.mode = "restart";
      job.dataset = dataset_path;
      job.queries = queries_path;
      job.index_dir = index_dir;
      job.workers = config.workers;
      job.radii = {radii.front()};
      job.measured = gate_n;
      job.backend = Backend::subcode;
      job.result = dir / "restart-subcode.json";
      const auto s = spawn_worker(config.worker_executable, job);
      job.backend = Backend::flat;
      job.result = dir / "restart-flat.json";
      const auto f = spawn_worker(config.worker_executable, job);
      restart.subcode_build_seconds = subcode_build_s;
      restart.subcode_open_seconds = s.at("setup_seconds").get<double>();
      restart.subcode_build_invocations = s.at("build_invocations").get<std::uint64_t>();
      restart.subcode_results_match =
          s.at("digest").get<std::string>() == std::to_string(reference.value());
      restart.flat_rebuild_seconds = f.at("setup_seconds").get<double>();
      restart.status = restart.subcode_results_match ? kStatusOk : "error: reopened results differ";
    } catch (const std::exception& e) {
      restart.status = std::string("error: ") + e.what();
    }
  } catch (const std::exception& e) {
    for (auto* row : rows_of(std::nullopt)) {
      if (row->status == "error: not run") row->status = std::string("error: ") + e.what();
    }
    if (eq.detail.empty()) eq.detail = std::string("not run: ") + e.what();
    report.notes.push_back("m=" + std::to_string(m) + " failed: " + e.what());
    log(progress, "m=" + std::to_string(m) + " failed: " + e.what());
  }
  report.equivalence.push_back(eq);
  report.restarts.push_back(restart);
  if (!config.keep_indexes) {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
}

}  // namespace detail

inline void write_report_files(const BenchReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir / "report.csv");
  write_csv(report, csv);
  std::ofstream md(out_dir / "report.md");
  write_markdown(report, md);
  if (!csv || !md) throw Error("cannot write report files in " + out_dir.string());
}

// Builds both backends per width, gates on equivalence, measures warm and
// cold latency in worker processes, checks restart behavior and writes
// report.csv and report.md into the output directory.
inline BenchReport run_suite(const BenchConfig& config, std::ostream* progress = nullptr) {
  config.validate();
  BenchReport report;
  report.environment = capture_environment(config);
  for (auto m : config.widths) detail::run_width(config, m, report, progress);
  report.notes.push_back(
      "Warm rows follow a warm-up pass of " + std::to_string(config.warmup_query_count) +
      " queries per radius; cold rows run " + std::to_string(config.cold_query_count) +
      " queries in a fresh process without a warm-up pass (the OS file cache is not dropped).");
  report.notes.push_back(
      "Resident memory is sampled every 100 ms during the query phase of each worker; warm "
      "peaks are attributed to the radius being measured.");
  report.notes.push_back(
      "Latency tables are shaped by their contents: Table 2 holds latency in ms per (m, r) and "
      "Table 3 holds memory per (m, r).");
  write_report_files(report, config.output_dir);
  return report;
}

}  // namespace hamming::bench
