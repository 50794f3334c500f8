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

#include <sys/utsname.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hamming/bench/config.hpp"
#include "hamming/bench/stats.hpp"

namespace hamming::bench {

enum class Backend { flat, subcode };

inline const char* to_string(Backend b) { return b == Backend::flat ? "flat" : "subcode"; }

inline Backend parse_backend(const std::string& s) {
  if (s == "flat") return Backend::flat;
  if (s == "subcode") return Backend::subcode;
  throw ConfigError("unknown backend '" + s + "' (expected flat or subcode)");
}

enum class Condition { warm, cold };

inline const char* to_string(Condition c) { return c == Condition::warm ? "warm" : "cold"; }

inline constexpr const char* kStatusOk = "ok";
inline constexpr const char* kStatusEquivalenceFailed = "equivalence-failed";

struct BenchRow {
  Backend backend = Backend::flat;
  std::uint32_t width_bits = 0;
  std::uint32_t radius = 0;
  Condition condition = Condition::warm;
  std::optional<double> build_seconds;
  std::optional<LatencyStats> latency;
  std::optional<std::uint64_t> resident_bytes_peak;
  bool rss_available = true;
  bool filter_bypass = false;
  std::string status = kStatusOk;
};

struct RestartRecord {
  std::uint32_t width_bits = 0;
  double subcode_build_seconds = 0.0;
  double subcode_open_seconds = 0.0;
  std::uint64_t subcode_build_invocations = 0;
  bool subcode_results_match = false;
  double flat_rebuild_seconds = 0.0;
  std::string status = kStatusOk;
};

struct EquivalenceRecord {
  std::uint32_t width_bits = 0;
  std::size_t queries = 0;
  std::vector<std::uint32_t> radii;
  bool passed = false;
  std::string detail;
};

struct Environment {
  std::string cpu;
  unsigned logical_cpus = 0;
  std::string memory;
  std::string os;
  std::string timestamp;
  std::vector<std::pair<std::string, std::string>> config;
};

inline Environment capture_environment(const BenchConfig& config) {
  Environment env;
  {
    std::ifstream cpuinfo("/proc/cpuinfo");
    std::string line;
    while (std::getline(cpuinfo, line)) {
      if (line.rfind("model name", 0) == 0) {
        env.cpu = line.substr(line.find(':') + 2);
        break;
      }
    }
    if (env.cpu.empty()) env.cpu = "unknown";
  }
  env.logical_cpus = std::thread::hardware_concurrency();
  {
    std::ifstream meminfo("/proc/meminfo");
    std::string line;
    if (std::getline(meminfo, line)) env.memory = line;
    if (env.memory.empty()) env.memory = "unknown";
  }
  struct utsname u {};
  env.os = ::uname(&u) == 0 ? std::string(u.sysname) + " " + u.release + " " + u.machine : "unknown";
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  ::gmtime_r(&now, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  env.timestamp = ts.str();
  env.config = config.describe();
  return env;
}

struct BenchReport {
  Environment environment;
  std::vector<BenchRow> rows;
  std::vector<RestartRecord> restarts;
  std::vector<EquivalenceRecord> equivalence;
  std::vector<std::string> notes;

  const BenchRow* find(Backend b, std::uint32_t m, std::uint32_t r, Condition c) const {
    for (const auto& row : rows) {
      if (row.backend == b && row.width_bits == m && row.radius == r && row.condition == c) {
        return &row;
      }
    }
    return nullptr;
  }
};

namespace detail {

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "backend,width_bits,radius,condition,build_seconds,latency_mean_ms,latency_p50_ms,"
    "latency_p95_ms,resident_bytes_peak,filter_bypass,status";

inline void write_csv(const BenchReport& report, std::ostream& out) {
  using detail::fixed;
  out << kCsvHeader << "\n";
  for (const auto& r : report.rows) {
    out << to_string(r.backend) << "," << r.width_bits << "," << r.radius << ","
        << to_string(r.condition) << ",";
    out << (r.build_seconds ? fixed(*r.build_seconds, 6) : "") << ",";
    if (r.latency) {
      out << fixed(r.latency->mean_ms, 4) << "," << fixed(r.latency->p50_ms, 4) << ","
          << fixed(r.latency->p95_ms, 4) << ",";
    } else {
      out << ",,,";
    }
    if (!r.rss_available) {
      out << "rss-unavailable";
    } else if (r.resident_bytes_peak) {
      out << *r.resident_bytes_peak;
    }
    out << "," << (r.filter_bypass ? "true" : "false") << "," << detail::csv_field(r.status)
        << "\n";
  }
}

inline void write_markdown(const BenchReport& report, std::ostream& out) {
  using detail::fixed;
  std::vector<std::uint32_t> widths;
  std::map<std::uint32_t, std::vector<std::uint32_t>> radii;
  for (const auto& r : report.rows) {
    if (std::find(widths.begin(), widths.end(), r.width_bits) == widths.end()) {
      widths.push_back(r.width_bits);
    }
    auto& rs = radii[r.width_bits];
    if (std::find(rs.begin(), rs.end(), r.radius) == rs.end()) rs.push_back(r.radius);
  }
  auto latency_cell = [](const BenchRow* row) -> std::string {
    if (!row) return "missing";
    if (row->status != kStatusOk) return row->status;
    return row->latency ? fixed(row->latency->mean_ms, 3) : "n/a";
  };
  auto memory_cell = [](const BenchRow* row) -> std::string {
    if (!row) return "missing";
    if (!row->rss_available) return "rss-unavailable";
    if (row->status != kStatusOk && !row->resident_bytes_peak) return row->status;
    return row->resident_bytes_peak ? fixed(*row->resident_bytes_peak / 1048576.0, 1) : "n/a";
  };

  out << "# Hamming-space radius search benchmark\n\n";
  out << "## Environment\n\n";
  out << "- CPU: " << report.environment.cpu << " (" << report.environment.logical_cpus
      << " logical)\n";
  out << "- Memory: " << report.environment.memory << "\n";
  out << "- OS: " << report.environment.os << "\n";
  out << "- Timestamp: " << report.environment.timestamp << "\n";
  out << "- Config:\n";
  for (const auto& [k, v] : report.environment.config) out << "  - `" << k << " = " << v << "`\n";

  out << "\n## Table 1: indexing time (seconds)\n\n";
  out << "| # of bits | flat (s) | subcode (s) | subcode / flat |\n|---|---|---|---|\n";
  for (auto m : widths) {
    const BenchRow* f = report.find(Backend::flat, m, radii[m].front(), Condition::warm);
    const BenchRow* s = report.find(Backend::subcode, m, radii[m].front(), Condition::warm);
    auto cell = [](const BenchRow* row) {
      return row && row->build_seconds ? fixed(*row->build_seconds, 4) : std::string("n/a");
    };
    std::string ratio = "n/a";
    if (f && s && f->build_seconds && s->build_seconds && *f->build_seconds > 0) {
      ratio = fixed(*s->build_seconds / *f->build_seconds, 1) + "x";
    }
    out << "| " << m << " | " << cell(f) << " | " << cell(s) << " | " << ratio << " |\n";
  }

  out << "\n## Table 2: search latency (mean ms per query)\n\n";
  out << "| # of bits | r | flat warm | subcode warm | subcode path | flat cold | subcode cold |\n"
         "|---|---|---|---|---|---|---|\n";
  for (auto m : widths) {
    for (auto r : radii[m]) {
      const BenchRow* sw = report.find(Backend::subcode, m, r, Condition::warm);
      out << "| " << m << " | " << r << " | "
          << latency_cell(report.find(Backend::flat, m, r, Condition::warm)) << " | "
          << latency_cell(sw) << " | " << (sw && sw->filter_bypass ? "bypass (full scan)" : "filter")
          << " | " << latency_cell(report.find(Backend::flat, m, r, Condition::cold)) << " | "
          << latency_cell(report.find(Backend::subcode, m, r, Condition::cold)) << " |\n";
    }
  }

  out << "\n## Table 3: resident memory (peak MiB, warm run)\n\n";
  out << "| # of bits | r | flat (MiB) | subcode (MiB) |\n|---|---|---|---|\n";
  for (auto m : widths) {
    for (auto r : radii[m]) {
      out << "| " << m << " | " << r << " | "
          << memory_cell(report.find(Backend::flat, m, r, Condition::warm)) << " | "
          << memory_cell(report.find(Backend::subcode, m, r, Condition::warm)) << " |\n";
    }
  }

  out << "\n## Restart check\n\n";
  out << "| # of bits | subcode build (s) | subcode reopen (s) | rebuilds after restart | "
         "reopened results match | flat rebuild (s) | status |\n|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.restarts) {
    out << "| " << r.width_bits << " | " << fixed(r.subcode_build_seconds, 4) << " | "
        << fixed(r.subcode_open_seconds, 6) << " | " << r.subcode_build_invocations << " | "
        << (r.subcode_results_match ? "yes" : "no") << " | " << fixed(r.flat_rebuild_seconds, 4)
        << " | " << r.status << " |\n";
  }

  out << "\n## Equivalence gate\n\n";
  out << "| # of bits | queries | radii | result |\n|---|---|---|---|\n";
  for (const auto& e : report.equivalence) {
    out << "| " << e.width_bits << " | " << e.queries << " | " << detail::join(e.radii) << " | "
        << (e.passed ? "pass" : "FAIL: " + e.detail) << " |\n";
  }

  if (!report.notes.empty()) {
    out << "\n## Notes\n\n";
    for (const auto& n : report.notes) out << "- " << n << "\n";
  }
}

}  // namespace hamming::bench
