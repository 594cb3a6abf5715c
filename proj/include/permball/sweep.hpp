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

// Sweeps over (n, r) x family. Specs are computed by a small worker pool;
// rows are emitted in (n, r, family) order regardless of scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "permball/bounds.hpp"
#include "permball/cache.hpp"
#include "permball/core.hpp"
#include "permball/io.hpp"
#include "permball/oracle.hpp"
#include "permball/version.hpp"

namespace permball {

// Exact counts are attempted only when the cheapest backend's estimated
// cost (natural log of an operation count) stays below this.
inline constexpr double kSweepExactLogCostLimit = 20.0;

struct SweepConfig {
  std::vector<int> n_list;
  std::vector<int> r_list;                    // explicit radii
  std::vector<NormalizedRadius> rho_list;     // or normalized radii
  std::vector<Family> families{kAllFamilies.begin(), kAllFamilies.end()};
  std::optional<std::filesystem::path> cache_dir;  // no cache when empty
  Capacity capacity;
  int jobs = 1;
};

struct SweepRow {
  BallSpec spec;
  Family family = Family::phi1;
  std::optional<BoundValue> bound;
  std::optional<ExactResult> exact;
  std::string error;  // non-empty when the row failed
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> notices;  // skipped inputs
  std::size_t failures = 0;
  bool any_success() const { return rows.size() > failures; }
};

// Expands the selectors into sorted, de-duplicated valid specs.
inline std::vector<BallSpec> expand_specs(const SweepConfig& cfg, std::vector<std::string>& notices) {
  std::set<BallSpec> specs;
  for (int n : cfg.n_list) {
    if (n < 1) {
      notices.push_back("skipped n=" + std::to_string(n) + ": n must be positive");
      continue;
    }
    if (cfg.r_list.empty() && cfg.rho_list.empty()) {
      for (int r = 0; r < n; ++r) specs.insert(BallSpec(n, r));
    }
    for (int r : cfg.r_list) {
      if (r < 0 || r > n - 1) {
        notices.push_back("skipped n=" + std::to_string(n) + " r=" + std::to_string(r) + ": need 0 <= r <= n-1");
        continue;
      }
      specs.insert(BallSpec(n, r));
    }
    for (const auto& rho : cfg.rho_list) {
      try {
        specs.insert(radius_from_rho(rho, n));
      } catch (const ValidationError& e) {
        notices.push_back(std::string("skipped: ") + e.what());
      }
    }
  }
  return {specs.begin(), specs.end()};
}

inline bool exact_affordable(const BallSpec& spec, const Capacity& cap) {
  auto backends = applicable_backends(spec, cap);
  for (Backend b : backends)
    if (detail::log_cost(b, spec) <= kSweepExactLogCostLimit) return true;
  return false;
}

inline SweepResult run_sweep(const SweepConfig& cfg) {
  SweepResult result;
  const std::vector<BallSpec> specs = expand_specs(cfg, result.notices);
  std::vector<Family> families = cfg.families;
  std::sort(families.begin(), families.end(),
            [](Family a, Family b) { return to_string(a) < to_string(b); });
  families.erase(std::unique(families.begin(), families.end()), families.end());

  std::vector<std::vector<SweepRow>> per_spec(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < specs.size(); k = next++) {
      const BallSpec& spec = specs[k];
      std::optional<ExactResult> exact;
      std::string exact_error;
      if (exact_affordable(spec, cfg.capacity)) {
        try {
          exact = cfg.cache_dir ? Cache(*cfg.cache_dir).get_or_compute(spec, cfg.capacity)
                                : ball_size_exact(spec, DispatchMode::cheapest, cfg.capacity);
        } catch (const std::exception& e) {
          exact_error = e.what();
        }
      }
      for (Family f : families) {
        SweepRow row{spec, f, std::nullopt, exact, exact_error};
        try {
          row.bound = finite_bound(f, spec);
        } catch (const std::exception& e) {
          row.error = row.error.empty() ? e.what() : row.error + "; " + e.what();
        }
        per_spec[k].push_back(std::move(row));
      }
    }
  };
  const int jobs = std::max(1, cfg.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (auto& rows : per_spec) {
    for (auto& row : rows) {
      if (!row.error.empty()) ++result.failures;
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

inline Table sweep_table(const SweepResult& res) {
  Table t;
  t.metadata.push_back("permball " + std::string(kVersion) + " sweep");
  t.metadata.push_back("bits are log2 values; lower families bound log2|B| from below, Phi1 from above");
  for (const auto& note : res.notices) t.metadata.push_back(note);
  t.header = schemas::sweep().header();
  for (const auto& row : res.rows) {
    const bool ok = row.error.empty();
    const bool valid = row.bound && row.bound->valid;
    t.rows.push_back({std::to_string(row.spec.n), std::to_string(row.spec.r), format_real(row.spec.rho()),
                      to_string(row.family), to_string(direction_of(row.family)),
                      valid ? format_real(row.bound->bits.value) : "", valid ? "true" : "false",
                      ok ? (row.bound ? row.bound->reason : "") : row.error,
                      row.exact ? row.exact->count.to_string() : "",
                      row.exact ? format_real(row.exact->count.log2()) : "",
                      row.exact ? to_string(row.exact->backend) : "", ok ? "ok" : "error"});
  }
  return t;
}

}  // namespace permball
