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

// Exact ball sizes |B_{r,n}| = per(A_{r,n}). Three independent backends
// (exhaustive enumeration, Ryser's formula, a sliding-window DP over the
// band) plus the trivial r = n-1 case, and a dispatcher that can run all of
// them against each other.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "permball/core.hpp"
#include "permball/errors.hpp"

namespace permball {

// log2 of a positive big integer, accurate to double precision.
inline double log2_big(const mpz_class& value) {
  if (sgn(value) <= 0) throw DomainError("log2 of a non-positive integer");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log2(mantissa) + static_cast<double>(exponent);
}

inline mpz_class factorial_big(int n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(std::max(n, 0)));
  return out;
}

class ExactCount {
 public:
  ExactCount() : value_(1) {}
  explicit ExactCount(mpz_class value) : value_(std::move(value)) {
    if (sgn(value_) < 0) throw DomainError("count cannot be negative");
  }

  static ExactCount parse(const std::string& decimal) {
    if (decimal.empty() || !std::all_of(decimal.begin(), decimal.end(),
                                        [](char c) { return c >= '0' && c <= '9'; })) {
      throw ValidationError("'" + decimal + "' is not a decimal count");
    }
    return ExactCount(mpz_class(decimal, 10));
  }

  const mpz_class& value() const noexcept { return value_; }
  std::string to_string() const { return value_.get_str(10); }
  double log2() const { return log2_big(value_); }

  bool operator==(const ExactCount& o) const { return value_ == o.value_; }
  bool operator<(const ExactCount& o) const { return value_ < o.value_; }

 private:
  mpz_class value_;
};

// Documented limits of each backend. `expert()` lifts them to what the
// implementation can represent at all.
struct Capacity {
  int enumerate_max_n = 10;
  int ryser_max_n = 30;
  int band_dp_max_window = 26;  // 2r+1

  static Capacity expert() { return Capacity{13, 62, 31}; }
};

enum class Backend { enumerate, ryser, band_dp, factorial };

inline std::string to_string(Backend b) {
  switch (b) {
    case Backend::enumerate: return "enumerate";
    case Backend::ryser: return "ryser";
    case Backend::band_dp: return "band_dp";
    case Backend::factorial: return "factorial";
  }
  return "?";
}

inline std::optional<Backend> backend_from_string(const std::string& s) {
  for (Backend b : {Backend::enumerate, Backend::ryser, Backend::band_dp, Backend::factorial}) {
    if (to_string(b) == s) return b;
  }
  return std::nullopt;
}

// Counts g in S_n with d(id, g) <= r by walking all n! permutations.
inline ExactCount ball_size_enumerate(const BallSpec& spec, const Capacity& cap = {}) {
  if (spec.n > cap.enumerate_max_n) {
    throw CapacityError("enumeration limited to n <= " + std::to_string(cap.enumerate_max_n) +
                        " (n=" + std::to_string(spec.n) + "); use the band DP backend");
  }
  std::vector<int> perm(static_cast<std::size_t>(spec.n));
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;
  do {
    bool inside = true;
    for (int i = 0; i < spec.n && inside; ++i) {
      inside = std::abs(perm[static_cast<std::size_t>(i)] - i) <= spec.r;
    }
    count += inside ? 1 : 0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ExactCount(mpz_class(static_cast<unsigned long>(count)));
}

// Dense square matrix of non-negative integers, row-major.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<long> data;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}
  IntMatrix(int r, int c, std::vector<long> values) : rows(r), cols(c), data(std::move(values)) {
    if (data.size() != static_cast<std::size_t>(r) * static_cast<std::size_t>(c)) {
      throw DimensionError("IntMatrix: " + std::to_string(data.size()) + " values for a " + std::to_string(r) + "x" +
                           std::to_string(c) + " matrix");
    }
  }

  long& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  long operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

  static IntMatrix from_band(const BallSpec& spec) {
    IntMatrix m(spec.n, spec.n);
    const BandMatrix band(spec);
    for (int i = 0; i < spec.n; ++i)
      for (int j = 0; j < spec.n; ++j) m(i, j) = band.entry(i + 1, j + 1);
    return m;
  }
};

// Ryser's inclusion-exclusion over column subsets, visited in Gray-code
// order so each step updates the row sums by one column.
inline ExactCount permanent_ryser(const IntMatrix& m, const Capacity& cap = {}) {
  if (m.rows != m.cols) {
    throw DimensionError("permanent needs a square matrix, got " + std::to_string(m.rows) + "x" +
                         std::to_string(m.cols));
  }
  const int n = m.rows;
  if (n > cap.ryser_max_n) {
    throw CapacityError("Ryser limited to n <= " + std::to_string(cap.ryser_max_n));
  }
  if (n == 0) return ExactCount(mpz_class(1));
  for (long v : m.data) {
    if (v < 0) throw DomainError("permanent_ryser expects non-negative entries");
  }
  std::vector<mpz_class> row_sum(static_cast<std::size_t>(n), 0);
  mpz_class total = 0;
  mpz_class product;
  std::uint64_t gray = 0;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < limit; ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const std::uint64_t flipped = next ^ gray;
    const int col = std::countr_zero(flipped);
    const bool added = (next & flipped) != 0;
    for (int i = 0; i < n; ++i) {
      if (added)
        row_sum[static_cast<std::size_t>(i)] += m(i, col);
      else
        row_sum[static_cast<std::size_t>(i)] -= m(i, col);
    }
    gray = next;
    product = 1;
    for (int i = 0; i < n && sgn(product) != 0; ++i) product *= row_sum[static_cast<std::size_t>(i)];
    // sign (-1)^(n - |S|)
    if (((n - std::popcount(next)) & 1) == 0)
      total += product;
    else
      total -= product;
  }
  return ExactCount(total);
}

// Bit layout of the sliding window. Both must give identical counts.
enum class WindowEncoding { low_to_high, high_to_low };

// Row sweep over the band. Before row i the state records which columns in
// the window i-r .. i+r are already taken; columns outside 1..n are marked
// taken up front. Leaving row i requires column i-r to be taken, since no
// later row can reach it.
inline ExactCount ball_size_band_dp(const BallSpec& spec, const Capacity& cap = {},
                                    WindowEncoding encoding = WindowEncoding::low_to_high) {
  const int width = 2 * spec.r + 1;
  if (width > cap.band_dp_max_window) {
    throw CapacityError("band DP window 2r+1=" + std::to_string(width) + " exceeds " +
                        std::to_string(cap.band_dp_max_window) + "; use Ryser for small n");
  }
  const int n = spec.n;
  const int r = spec.r;
  // offset k in 0..2r is column (i - r + k), 0-based row i.
  auto bit = [&](int k) -> std::uint32_t {
    return encoding == WindowEncoding::low_to_high ? (std::uint32_t{1} << k)
                                                   : (std::uint32_t{1} << (width - 1 - k));
  };
  auto shift = [&](std::uint32_t mask) -> std::uint32_t {
    return encoding == WindowEncoding::low_to_high ? (mask >> 1)
                                                   : ((mask << 1) & ((std::uint32_t{1} << width) - 1));
  };
  const std::uint32_t full = (width == 32) ? ~std::uint32_t{0} : ((std::uint32_t{1} << width) - 1);

  std::uint32_t start = 0;
  for (int k = 0; k < width; ++k) {
    const int col = k - r;
    if (col < 0 || col >= n) start |= bit(k);
  }
  std::unordered_map<std::uint32_t, mpz_class> states{{start, mpz_class(1)}};
  for (int i = 0; i < n; ++i) {
    std::unordered_map<std::uint32_t, mpz_class> next;
    next.reserve(states.size() * 2);
    const int incoming_col = i + 1 + r;
    const std::uint32_t incoming = (incoming_col >= n) ? bit(width - 1) : 0;
    for (const auto& [mask, count] : states) {
      for (int k = 0; k < width; ++k) {
        if (mask & bit(k)) continue;
        const std::uint32_t taken = mask | bit(k);
        if (!(taken & bit(0))) continue;
        next[shift(taken) | incoming] += count;
      }
    }
    states = std::move(next);
  }
  auto it = states.find(full);
  return ExactCount(it == states.end() ? mpz_class(0) : it->second);
}

enum class DispatchMode { cheapest, verify_all };

struct ExactResult {
  ExactCount count;
  Backend backend = Backend::band_dp;
  std::vector<Backend> agreed;  // every backend that ran (verify_all)
};

namespace detail {

inline double log_binomial(int a, int b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

// Rough operation counts (natural log) used to pick the cheapest backend.
inline double log_cost(Backend b, const BallSpec& s) {
  switch (b) {
    case Backend::factorial: return 0.0;
    case Backend::enumerate: return std::lgamma(s.n + 1.0) + std::log(s.n);
    case Backend::ryser: return s.n * std::log(2.0) + 2 * std::log(s.n) + 1.0;
    case Backend::band_dp: return std::log(s.n) + log_binomial(2 * s.r, s.r) + std::log(2 * s.r + 1.0);
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace detail

inline std::vector<Backend> applicable_backends(const BallSpec& spec, const Capacity& cap = {}) {
  std::vector<Backend> out;
  if (spec.r == spec.n - 1) out.push_back(Backend::factorial);
  if (2 * spec.r + 1 <= cap.band_dp_max_window) out.push_back(Backend::band_dp);
  if (spec.n <= cap.ryser_max_n) out.push_back(Backend::ryser);
  if (spec.n <= cap.enumerate_max_n) out.push_back(Backend::enumerate);
  return out;
}

inline ExactCount run_backend(Backend b, const BallSpec& spec, const Capacity& cap = {}) {
  switch (b) {
    case Backend::factorial:
      if (spec.r != spec.n - 1) throw CapacityError("factorial backend only applies to r = n-1");
      return ExactCount(factorial_big(spec.n));
    case Backend::enumerate: return ball_size_enumerate(spec, cap);
    case Backend::ryser: return permanent_ryser(IntMatrix::from_band(spec), cap);
    case Backend::band_dp: return ball_size_band_dp(spec, cap);
  }
  throw CapacityError("unknown backend");
}

// Thrown by verify_all when two backends disagree. Never expected.
class BackendDisagreement : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline ExactResult ball_size_exact(const BallSpec& spec, DispatchMode mode = DispatchMode::cheapest,
                                   const Capacity& cap = {}) {
  auto backends = applicable_backends(spec, cap);
  if (backends.empty()) {
    throw CapacityError("no exact backend applies to " + to_string(spec) +
                        ": need 2r+1 <= " + std::to_string(cap.band_dp_max_window) + " or n <= " +
                        std::to_string(cap.ryser_max_n));
  }
  std::sort(backends.begin(), backends.end(), [&](Backend a, Backend b) {
    return detail::log_cost(a, spec) < detail::log_cost(b, spec);
  });
  ExactResult result{run_backend(backends.front(), spec, cap), backends.front(), {backends.front()}};
  if (mode == DispatchMode::verify_all) {
    for (std::size_t k = 1; k < backends.size(); ++k) {
      ExactCount other = run_backend(backends[k], spec, cap);
      if (!(other == result.count)) {
        throw BackendDisagreement("backends " + to_string(backends.front()) + " and " +
                                  to_string(backends[k]) + " disagree on " + to_string(spec) + ": " +
                                  result.count.to_string() + " vs " + other.to_string());
      }
      result.agreed.push_back(backends[k]);
    }
  }
  return result;
}

}  // namespace permball
