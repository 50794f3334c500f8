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


// hamming: command-line front end for dataset generation, indexing, search,
// cross-backend verification and benchmarking.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <system_error>
#include <vector>

#include "hamming/bench/suite.hpp"
#include "hamming/datagen.hpp"
#include "hamming/dataset.hpp"
#include "hamming/flat_index.hpp"
#include "hamming/oracle.hpp"
#include "hamming/subcode_index.hpp"

namespace {

namespace fs = std::filesystem;
using namespace hamming;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerify = 3;

struct VerificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_result(const NeighborSet& result) {
  const NeighborSet sorted = result.sorted();
  for (const auto& n : sorted.entries()) std::cout << n.id << "\t" << n.distance << "\n";
}

int cmd_gen(std::size_t count, std::uint32_t bits, std::uint64_t seed, std::size_t clusters,
            double flip, const fs::path& out) {
  const auto ds = gen_synthetic({count, bits, seed, clusters, flip});
  dataset_save(ds, out);
  std::cerr << "wrote " << ds.count() << " codes of " << bits << " bits to " << out << "\n";
  return kExitOk;
}

int cmd_phash(std::uint32_t bits, const fs::path& images, const fs::path& out) {
  std::vector<fs::path> order;
  const auto ds = phash_directory(images, bits, &order);
  dataset_save(ds, out);
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::cout << i << "\t" << order[i].filename().string() << "\n";
  }
  std::cerr << "hashed " << ds.count() << " images into " << out << "\n";
  return kExitOk;
}

int cmd_index(const std::string& backend, const fs::path& dataset_path, std::uint32_t sub_width,
              std::uint32_t shards, const fs::path& dir, std::size_t workers) {
  const auto ds = dataset_load(dataset_path);
  if (bench::parse_backend(backend) == bench::Backend::flat) {
    const double s = bench::measure_build(bench::Backend::flat, ds, {workers, shards, sub_width, {}});
    std::cout << "flat index over " << ds.count() << " codes built in " << s
              << " s (in memory; rebuilt on every start)\n";
    return kExitOk;
  }
  if (dir.empty()) throw UsageError("index --backend subcode requires --dir");
  const double s =
      bench::measure_build(bench::Backend::subcode, ds, {workers, shards, sub_width, dir});
  std::cout << "subcode index over " << ds.count() << " codes written to " << dir << " in " << s
            << " s\n";
  return kExitOk;
}

int cmd_search(const std::string& backend, const fs::path& dataset_path, const fs::path& dir,
               std::uint32_t query_id, std::uint32_t radius, std::size_t workers) {
  if (bench::parse_backend(backend) == bench::Backend::flat) {
    if (dataset_path.empty()) throw UsageError("search --backend flat requires --dataset");
    const auto ds = dataset_load(dataset_path);
    if (query_id >= ds.count()) {
      throw InputError("query id " + std::to_string(query_id) + " out of range (count " +
                       std::to_string(ds.count()) + ")");
    }
    const auto index = FlatIndex::build(ds, workers);
    print_result(index.range_search({ds.code(query_id), radius}));
    return kExitOk;
  }
  if (dir.empty()) throw UsageError("search --backend subcode requires --dir");
  const auto index = SubCodeIndex::open(dir);
  if (query_id >= index.count()) {
    throw InputError("query id " + std::to_string(query_id) + " out of range (count " +
                     std::to_string(index.count()) + ")");
  }
  print_result(index.range_search({index.code(query_id), radius}));
  return kExitOk;
}

int cmd_verify(const fs::path& dataset_path, std::size_t query_count,
               const std::vector<std::uint32_t>& radii, std::uint32_t sub_width,
               std::uint32_t shards, fs::path dir, std::size_t workers, std::uint64_t seed) {
  const auto ds = dataset_load(dataset_path);
  if (query_count == 0 || query_count > ds.count()) {
    throw InputError("--queries must lie in [1, " + std::to_string(ds.count()) + "]");
  }
  for (auto r : radii) {
    if (r > ds.width_bits()) throw InputError("radius " + std::to_string(r) + " exceeds width");
  }
  const bool temporary = dir.empty();
  if (temporary) dir = fs::temp_directory_path() / ("hamming-verify-" + std::to_string(::getpid()));
  subcode_build(ds, plan_geometry(ds.width_bits(), sub_width), shards, dir);
  const auto subcode = SubCodeIndex::open(dir);
  const auto flat = FlatIndex::build(ds, workers);
  std::vector<BinaryCode> queries;
  for (auto id : bench::sample_query_ids(ds.count(), query_count, seed)) {
    queries.push_back(ds.code(id));
  }
  const auto summary = bench::verify_equivalence(ds, flat, subcode, queries, radii);
  if (temporary) {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::cout << summary.describe() << "\n";
  if (!summary.passed()) throw VerificationFailed(summary.describe());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (auto code = bench::maybe_run_worker(argc, argv)) return *code;

  CLI::App app{"Exact r-neighbor search over binary codes"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic code dataset");
  std::size_t count = 0, clusters = 0;
  std::uint32_t bits = 64;
  std::uint64_t seed = 42;
  double flip = 0.0;
  fs::path out;
  gen->add_option("--count", count, "Number of codes")->required();
  gen->add_option("--bits", bits, "Code width (multiple of 64)")->required();
  gen->add_option("--seed", seed, "RNG seed")->required();
  gen->add_option("--clusters", clusters, "Cluster centers (0: uniform)");
  gen->add_option("--flip-prob", flip, "Per-bit flip probability around a center");
  gen->add_option("--out", out, "Output dataset file")->required();

  auto* ph = app.add_subcommand("phash", "Perceptual-hash a directory of PGM images");
  fs::path images;
  ph->add_option("--bits", bits, "Code width: 64, 256, 1024 or 4096")->required();
  ph->add_option("--images", images, "Directory of .pgm files")->required();
  ph->add_option("--out", out, "Output dataset file")->required();

  std::string backend;
  fs::path dataset, dir;
  std::uint32_t sub_width = kDefaultSubWidth, shards = kDefaultShardCount;
  std::size_t workers = kDefaultFlatWorkers;
  auto* index = app.add_subcommand("index", "Build an index");
  index->add_option("--backend", backend)->required()->check(CLI::IsMember({"flat", "subcode"}));
  index->add_option("--dataset", dataset)->required();
  index->add_option("--sub-width", sub_width, "Sub-code width: 8, 16, 32 or 64");
  index->add_option("--shards", shards);
  index->add_option("--dir", dir, "Index directory (subcode)");
  index->add_option("--workers", workers);

  std::uint32_t query_id = 0, radius = 0;
  auto* search = app.add_subcommand("search", "Print ids and distances within a radius");
  search->add_option("--backend", backend)->required()->check(CLI::IsMember({"flat", "subcode"}));
  search->add_option("--dataset", dataset);
  search->add_option("--dir", dir);
  search->add_option("--query-id", query_id)->required();
  search->add_option("--radius", radius)->required();
  search->add_option("--workers", workers);

  std::size_t query_count = 0;
  std::vector<std::uint32_t> radii;
  auto* verify = app.add_subcommand("verify", "Check flat, subcode and oracle agree");
  verify->add_option("--dataset", dataset)->required();
  verify->add_option("--queries", query_count)->required();
  verify->add_option("--radii", radii)->required()->delimiter(',');
  verify->add_option("--sub-width", sub_width);
  verify->add_option("--shards", shards);
  verify->add_option("--dir", dir, "Keep the sub-code index here");
  verify->add_option("--workers", workers);
  verify->add_option("--seed", seed, "Query sampling seed");

  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark suite");
  fs::path config_file;
  bench_cmd->add_option("--config", config_file, "key = value config file");
  const std::vector<std::pair<std::string, std::string>> bench_keys = {
      {"widths", "Code widths, comma separated"},
      {"radius-grid", "Radii per width, e.g. 64:3,7,11/256:15,31,47"},
      {"count", "Dataset size"},
      {"queries", "Measured queries per radius (0: scaled from 10,000 per 2.8M)"},
      {"cold-queries", "Queries per cold run"},
      {"warmup-queries", "Warm-up queries per radius"},
      {"gate-queries", "Queries in the equivalence gate"},
      {"workers", "Flat-scan threads"},
      {"shards", "Sub-code shards"},
      {"sub-width", "Sub-code width"},
      {"seed", "Seed"},
      {"clusters", "Cluster centers (0: uniform)"},
      {"flip-prob", "Per-bit flip probability"},
      {"out", "Output directory"},
      {"work-dir", "Scratch directory for datasets and indexes"},
      {"keep-indexes", "Keep scratch files (true/false)"},
      {"inject-fault", "Corrupt one gate answer (testing)"},
  };
  std::map<std::string, std::string> bench_values;
  for (const auto& [key, help] : bench_keys) {
    bench_cmd->add_option("--" + key, bench_values[key], help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_gen(count, bits, seed, clusters, flip, out);
    if (ph->parsed()) return cmd_phash(bits, images, out);
    if (index->parsed()) return cmd_index(backend, dataset, sub_width, shards, dir, workers);
    if (search->parsed()) return cmd_search(backend, dataset, dir, query_id, radius, workers);
    if (verify->parsed()) {
      return cmd_verify(dataset, query_count, radii, sub_width, shards, dir, workers, seed);
    }
    if (bench_cmd->parsed()) {
      bench::BenchConfig config;
      if (!config_file.empty()) bench::load_config_file(config_file, config);
      for (const auto& [key, help] : bench_keys) {
        if (bench_cmd->count("--" + key) > 0) config.apply(key, bench_values[key]);
      }
      const auto report = bench::run_suite(config, &std::cerr);
      std::cout << "wrote " << (config.output_dir / "report.csv").string() << " and "
                << (config.output_dir / "report.md").string() << "\n";
      for (const auto& eq : report.equivalence) {
        if (!eq.passed) return kExitVerify;
      }
      return kExitOk;
    }
  } catch (const VerificationFailed& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitVerify;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
