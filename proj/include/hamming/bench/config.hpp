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
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hamming/errors.hpp"
#include "hamming/flat_index.hpp"
#include "hamming/subcode_index.hpp"

namespace hamming::bench {

// Corpus size and query count of the reference catalog experiment; used to
// scale the query count down with the dataset.
inline constexpr double kReferenceCorpus = 2'800'000;
inline constexpr double kReferenceQueries = 10'000;

// Radius grid r in {m/16 - 1, m/8 - 1, 3m/16 - 1}: 3,7,11 at 64 bits up to
// 255,511,767 at 4096 bits.
inline std::vector<std::uint32_t> default_radii(std::uint32_t width_bits) {
  return {width_bits / 16 - 1, width_bits / 8 - 1, 3 * width_bits / 16 - 1};
}

struct BenchConfig {
  std::vector<std::uint32_t> widths = {64, 256, 1024, 4096};
  std::map<std::uint32_t, std::vector<std::uint32_t>> radius_grid;
  std::size_t dataset_count = 500'000;
  // 0 selects 10,000 scaled by dataset_count / 2.8M.
  std::size_t query_count = 0;
  std::size_t cold_query_count = 100;
  std::size_t warmup_query_count = 100;
  std::size_t gate_query_count = 20;
  std::size_t workers = kDefaultFlatWorkers;
  std::uint32_t shard_count = kDefaultShardCount;
  std::uint32_t sub_width = kDefaultSubWidth;
  std::uint64_t seed = 42;
  std::size_t cluster_count = 0;
  double flip_probability = 0.0;
  std::filesystem::path output_dir = "bench-out";
  std::filesystem::path work_dir;  // empty: <output_dir>/work
  bool keep_indexes = false;
  // Corrupts one sub-code result inside the equivalence gate (testing only).
  bool inject_fault = false;
  std::filesystem::path worker_executable = "/proc/self/exe";

  std::vector<std::uint32_t> radii_for(std::uint32_t width) const {
    auto it = radius_grid.find(width);
    return it != radius_grid.end() ? it->second : default_radii(width);
  }

  std::size_t effective_query_count() const {
    if (query_count > 0) return query_count;
    const auto scaled = static_cast<std::size_t>(
        std::llround(kReferenceQueries * static_cast<double>(dataset_count) / kReferenceCorpus));
    return std::clamp<std::size_t>(scaled, std::min<std::size_t>(10, dataset_count),
                                   std::max<std::size_t>(dataset_count, 1));
  }

  std::filesystem::path effective_work_dir() const {
    return work_dir.empty() ? output_dir / "work" : work_dir;
  }

  void validate() const {
    if (widths.empty()) throw ConfigError("no widths configured");
    for (auto m : widths) {
      BinaryCode::checked_width(m);
      plan_geometry(m, sub_width);
      for (auto r : radii_for(m)) {
        if (r > m) {
          throw ConfigError("radius " + std::to_string(r) + " exceeds width " + std::to_string(m));
        }
      }
      if (radii_for(m).empty()) throw ConfigError("empty radius list for width " + std::to_string(m));
    }
    if (dataset_count == 0) throw ConfigError("dataset count must be positive");
    if (effective_query_count() > dataset_count) {
      throw ConfigError("query count exceeds dataset count");
    }
    if (workers == 0) throw ConfigError("workers must be positive");
    if (shard_count == 0) throw ConfigError("shards must be positive");
    if (!(flip_probability >= 0.0 && flip_probability <= 0.5)) {
      throw ConfigError("flip-prob must lie in [0, 0.5]");
    }
  }

  // Applies one key/value setting; keys are the bench flag names without
  // leading dashes.
  void apply(const std::string& key, const std::string& value);

  // Flat key = value listing of every setting, in apply() syntax.
  std::vector<std::pair<std::string, std::string>> describe() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const auto t = trim(v);
    if (!t.empty() && t[0] == '-') throw std::invalid_argument("negative");
    const unsigned long long x = std::stoull(t, &used);
    if (used != t.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
}

inline std::vector<std::uint32_t> parse_uint_list(const std::string& key, const std::string& v) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    const auto x = parse_uint(key, item);
    if (x > UINT32_MAX) throw ConfigError(key + ": value out of range");
    out.push_back(static_cast<std::uint32_t>(x));
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  const auto t = trim(v);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

template <typename T>
std::string join(const std::vector<T>& xs, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(xs[i]);
  }
  return out;
}

}  // namespace detail

// Radius grid syntax: "64:3,7,11/256:15,31,47".
inline std::map<std::uint32_t, std::vector<std::uint32_t>> parse_radius_grid(const std::string& v) {
  std::map<std::uint32_t, std::vector<std::uint32_t>> grid;
  std::stringstream ss(v);
  std::string entry;
  while (std::getline(ss, entry, '/')) {
    entry = detail::trim(entry);
    if (entry.empty()) continue;
    const auto colon = entry.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("radius-grid: expected WIDTH:R1,R2,... got '" + entry + "'");
    }
    const auto width = detail::parse_uint("radius-grid", entry.substr(0, colon));
    grid[static_cast<std::uint32_t>(width)] =
        detail::parse_uint_list("radius-grid", entry.substr(colon + 1));
  }
  return grid;
}

inline void BenchConfig::apply(const std::string& raw_key, const std::string& value) {
  using namespace detail;
  const std::string key = trim(raw_key);
  if (key == "widths" || key == "bits") {
    widths = parse_uint_list(key, value);
  } else if (key == "radius-grid") {
    radius_grid = parse_radius_grid(value);
  } else if (key == "count") {
    dataset_count = parse_uint(key, value);
  } else if (key == "queries") {
    query_count = parse_uint(key, value);
  } else if (key == "cold-queries") {
    cold_query_count = parse_uint(key, value);
  } else if (key == "warmup-queries") {
    warmup_query_count = parse_uint(key, value);
  } else if (key == "gate-queries") {
    gate_query_count = parse_uint(key, value);
  } else if (key == "workers") {
    workers = parse_uint(key, value);
  } else if (key == "shards") {
    shard_count = static_cast<std::uint32_t>(parse_uint(key, value));
  } else if (key == "sub-width") {
    sub_width = static_cast<std::uint32_t>(parse_uint(key, value));
  } else if (key == "seed") {
    seed = parse_uint(key, value);
  } else if (key == "clusters") {
    cluster_count = parse_uint(key, value);
  } else if (key == "flip-prob") {
    try {
      flip_probability = std::stod(trim(value));
    } catch (const std::exception&) {
      throw ConfigError("flip-prob: expected a number, got '" + value + "'");
    }
  } else if (key == "out") {
    output_dir = trim(value);
  } else if (key == "work-dir") {
    work_dir = trim(value);
  } else if (key == "keep-indexes") {
    keep_indexes = parse_bool(key, value);
  } else if (key == "inject-fault") {
    inject_fault = parse_bool(key, value);
  } else if (key == "worker") {
    worker_executable = trim(value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

inline std::vector<std::pair<std::string, std::string>> BenchConfig::describe() const {
  using detail::join;
  std::string grid;
  for (auto m : widths) {
    if (!grid.empty()) grid += "/";
    grid += std::to_string(m) + ":" + join(radii_for(m));
  }
  return {
      {"widths", join(widths)},
      {"radius-grid", grid},
      {"count", std::to_string(dataset_count)},
      {"queries", std::to_string(effective_query_count())},
      {"cold-queries", std::to_string(cold_query_count)},
      {"warmup-queries", std::to_string(warmup_query_count)},
      {"gate-queries", std::to_string(gate_query_count)},
      {"workers", std::to_string(workers)},
      {"shards", std::to_string(shard_count)},
      {"sub-width", std::to_string(sub_width)},
      {"seed", std::to_string(seed)},
      {"clusters", std::to_string(cluster_count)},
      {"flip-prob", std::to_string(flip_probability)},
      {"out", output_dir.string()},
      {"inject-fault", inject_fault ? "true" : "false"},
  };
}

// Reads "key = value" lines; blank lines and '#' comments are ignored.
inline void load_config_file(const std::filesystem::path& path, BenchConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    config.apply(line.substr(0, eq), line.substr(eq + 1));
  }
}

}  // namespace hamming::bench
