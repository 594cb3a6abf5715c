// Copyright 2026 The permball Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// On-disk cache of exact ball sizes. One plain-text file per (n, r):
//
//   n=12
//   r=3
//   exact_count=...
//   backend=band_dp
//   tool_version=0.1.0
//   timestamp=2026-01-01T00:00:00Z
//
// Writes go to a temporary file that is renamed into place, so readers see
// either no record or a complete one. Records are never trusted blindly by
// verification: recheck() recomputes every stored count.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "permball/core.hpp"
#include "permball/errors.hpp"
#include "permball/oracle.hpp"
#include "permball/version.hpp"

namespace permball {

struct CacheRecord {
  int n = 0;
  int r = 0;
  std::string exact_count;
  std::string backend;
  std::string tool_version;
  std::string timestamp;
};

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Explicit directory, else $PERMBALL_CACHE, else ./.permball-cache.
inline std::filesystem::path resolve_cache_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PERMBALL_CACHE"); env && *env) return env;
  return ".permball-cache";
}

struct CacheMismatch {
  std::filesystem::path file;
  std::string message;
};

class Cache {
 public:
  explicit Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const noexcept { return dir_; }

  std::filesystem::path path_for(const BallSpec& spec) const {
    return dir_ / ("n" + std::to_string(spec.n) + "_r" + std::to_string(spec.r) + ".rec");
  }

  // Parses a record file; throws ValidationError when malformed.
  static CacheRecord read_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open cache record " + file.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto need = [&](const char* key) {
      auto it = kv.find(key);
      if (it == kv.end()) throw ValidationError("cache record " + file.string() + " lacks '" + key + "'");
      return it->second;
    };
    CacheRecord rec;
    try {
      rec.n = std::stoi(need("n"));
      rec.r = std::stoi(need("r"));
    } catch (const std::logic_error&) {
      throw ValidationError("cache record " + file.string() + " has a malformed key");
    }
    rec.exact_count = need("exact_count");
    rec.backend = need("backend");
    rec.tool_version = need("tool_version");
    rec.timestamp = need("timestamp");
    ExactCount::parse(rec.exact_count);  // validates the digits
    return rec;
  }

  std::optional<CacheRecord> load(const BallSpec& spec) const {
    const auto file = path_for(spec);
    std::error_code ec;
    if (!std::filesystem::exists(file, ec)) return std::nullopt;
    CacheRecord rec = read_file(file);
    if (rec.n != spec.n || rec.r != spec.r) {
      throw ValidationError("cache record " + file.string() + " is keyed to the wrong spec");
    }
    return rec;
  }

  void store(const CacheRecord& rec) const {
    std::filesystem::create_directories(dir_);
    const BallSpec spec(rec.n, rec.r);
    std::lock_guard<std::mutex> guard(key_mutex(spec));
    const auto final_path = path_for(spec);
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    const auto tmp = final_path.string() + ".tmp." + std::to_string(::getpid()) + "." + tid.str();
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write cache file " + tmp);
      out << "n=" << rec.n << "\nr=" << rec.r << "\nexact_count=" << rec.exact_count << "\nbackend=" << rec.backend
          << "\ntool_version=" << rec.tool_version << "\ntimestamp=" << rec.timestamp << "\n";
      if (!out.flush()) throw std::runtime_error("short write to cache file " + tmp);
    }
    std::filesystem::rename(tmp, final_path);
  }

  // Cached count, or compute and store it.
  ExactResult get_or_compute(const BallSpec& spec, const Capacity& cap = {}) const {
    if (auto rec = load(spec)) {
      auto backend = backend_from_string(rec->backend).value_or(Backend::band_dp);
      return ExactResult{ExactCount::parse(rec->exact_count), backend, {backend}};
    }
    ExactResult res = ball_size_exact(spec, DispatchMode::cheapest, cap);
    store(CacheRecord{spec.n, spec.r, res.count.to_string(), to_string(res.backend), kVersion, utc_timestamp()});
    return res;
  }

  std::vector<std::filesystem::path> record_files() const {
    std::vector<std::filesystem::path> out;
    std::error_code ec;
    if (!std::filesystem::is_directory(dir_, ec)) return out;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
      if (entry.is_regular_file() && entry.path().extension() == ".rec") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Recomputes every stored count; returns one entry per bad record.
  std::vector<CacheMismatch> recheck(const Capacity& cap = {}) const {
    std::vector<CacheMismatch> bad;
    for (const auto& file : record_files()) {
      try {
        const CacheRecord rec = read_file(file);
        const BallSpec spec(rec.n, rec.r);
        if (file.filename() != path_for(spec).filename()) {
          bad.push_back({file, "record is stored under the wrong key"});
          continue;
        }
        const ExactCount fresh = ball_size_exact(spec, DispatchMode::cheapest, cap).count;
        if (fresh.to_string() != rec.exact_count) {
          bad.push_back({file, "stored count " + rec.exact_count + " but recomputed " + fresh.to_string() +
                                   " for " + to_string(spec)});
        }
      } catch (const std::exception& e) {
        bad.push_back({file, e.what()});
      }
    }
    return bad;
  }

 private:
  static std::mutex& key_mutex(const BallSpec& spec) {
    static std::mutex table_mutex;
    static std::map<BallSpec, std::mutex> per_key;
    std::lock_guard<std::mutex> guard(table_mutex);
    return per_key[spec];
  }

  std::filesystem::path dir_;
};

}  // namespace permball
