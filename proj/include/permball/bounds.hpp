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

// Finite-n bounds on log2 |B_{r,n}|.
//
// The generic functionals take a non-negative matrix M and a doubly
// stochastic Q whose support lies inside M's:
//
//   vdw(M, Q)   = log2(n!/n^n) - sum q log2(q/m)
//   bethe(M, Q) = sum [-q log2(q/m) + (1-q) log2(1-q)]
//
// Both are lower bounds on log2 per(M). The closed-form families follow.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "permball/core.hpp"
#include "permball/errors.hpp"
#include "permball/qmat.hpp"
#include "permball/scalar.hpp"

namespace permball {

enum class Family { phi1, Phi1, phi1_prime, phi2, phi3, vdw_generic, bethe_generic };

inline constexpr std::array<Family, 7> kAllFamilies = {Family::phi1,        Family::Phi1,
                                                      Family::phi1_prime,  Family::phi2,
                                                      Family::phi3,        Family::vdw_generic,
                                                      Family::bethe_generic};

inline std::string to_string(Family f) {
  switch (f) {
    case Family::phi1: return "phi1";
    case Family::Phi1: return "Phi1";
    case Family::phi1_prime: return "phi1_prime";
    case Family::phi2: return "phi2";
    case Family::phi3: return "phi3";
    case Family::vdw_generic: return "vdw_generic";
    case Family::bethe_generic: return "bethe_generic";
  }
  return "?";
}

inline std::optional<Family> family_from_string(std::string_view s) {
  for (Family f : kAllFamilies)
    if (to_string(f) == s) return f;
  return std::nullopt;
}

enum class Direction { lower, upper };

inline std::string to_string(Direction d) { return d == Direction::lower ? "lower" : "upper"; }

inline Direction direction_of(Family f) { return f == Family::Phi1 ? Direction::upper : Direction::lower; }

struct BoundValue {
  Family family = Family::phi1;
  Direction direction = Direction::lower;
  Bits bits;
  BallSpec spec;
  bool valid = false;
  std::string reason;  // violated range condition when !valid
};

// Largest dense dimension for which the Sinkhorn-based generic families run.
inline constexpr int kGenericFamilyMaxN = 200;

// Row/column sums of Q must be within this of 1 for the functionals.
inline constexpr double kStochasticTolerance = 1e-8;

namespace detail {

inline std::string cell_name(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// Calls fn(i, j, m_ij, q_ij) for every cell where q may be nonzero, checking
// the support and stochasticity contracts on the way. Band-structured Q
// are visited on their band only.
template <MatrixLike M, MatrixLike Q, typename Fn>
void visit_support(const M& m, const Q& q, Fn&& fn) {
  const int n = q.size();
  if (m.size() != n) {
    throw DimensionError("matrix sizes differ: " + std::to_string(m.size()) + " vs " + std::to_string(n));
  }
  int band = n - 1;
  if constexpr (BandSupported<Q>) band = q.support().r;
  std::vector<double> row(static_cast<std::size_t>(n), 0.0);
  std::vector<double> col(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i) {
    const int lo = std::max(1, i - band);
    const int hi = std::min(n, i + band);
    for (int j = lo; j <= hi; ++j) {
      const double qij = q(i, j);
      if (qij == 0.0) continue;
      if (!(qij > 0.0)) {
        throw ContractError("q has a negative or non-finite entry at cell " + cell_name(i, j));
      }
      const double mij = m(i, j);
      if (!(mij > 0.0)) {
        std::ostringstream msg;
        msg << "support of q is not contained in support of m: q" << cell_name(i, j) << "=" << qij
            << " but m" << cell_name(i, j) << "=" << mij;
        throw ContractError(msg.str());
      }
      row[static_cast<std::size_t>(i - 1)] += qij;
      col[static_cast<std::size_t>(j - 1)] += qij;
      fn(i, j, mij, qij);
    }
  }
  for (int k = 1; k <= n; ++k) {
    const double dr = std::fabs(row[static_cast<std::size_t>(k - 1)] - 1.0);
    const double dc = std::fabs(col[static_cast<std::size_t>(k - 1)] - 1.0);
    if (dr > kStochasticTolerance || dc > kStochasticTolerance) {
      std::ostringstream msg;
      msg << "q is not doubly stochastic: " << (dr >= dc ? "row " : "column ") << k << " sums to "
          << (dr >= dc ? row[static_cast<std::size_t>(k - 1)] : col[static_cast<std::size_t>(k - 1)]);
      throw ContractError(msg.str());
    }
  }
}

}  // namespace detail

// log2(n!/n^n) + sum -q log2(q/m), with 0 log 0 = 0.
template <MatrixLike M, MatrixLike Q>
Bits vdw_sinkhorn_bound(const M& m, const Q& q) {
  detail::CompensatedSum sum;
  detail::visit_support(m, q, [&](int, int, double mij, double qij) { sum.add(-qij * std::log2(qij / mij)); });
  const int n = q.size();
  return Bits(log2_factorial(n).value - n * std::log2(static_cast<double>(n)) + sum.value());
}

// sum over the support of -q log2(q/m) + (1-q) log2(1-q).
template <MatrixLike M, MatrixLike Q>
Bits bethe_bound(const M& m, const Q& q) {
  detail::CompensatedSum sum;
  detail::visit_support(m, q, [&](int, int, double mij, double qij) {
    sum.add(-qij * std::log2(qij / mij));
    if (qij < 1.0) sum.add((1.0 - qij) * std::log2(1.0 - qij));
  });
  return Bits(sum.value());
}

// ---------------------------------------------------------------------------
// T = sum q log2 q for the second-class low Q, split over the five regions
// of the band: the two corner blocks (T1, T5), the two wedges beside them
// (T2, T4) and the middle columns (T3).

struct TDecomposition {
  std::array<double, 5> t{};
  double total() const { return t[0] + t[1] + t[2] + t[3] + t[4]; }
};

inline void require_second_low(const BallSpec& spec) {
  if (!(spec.r >= 1 && 2 * spec.r <= spec.n - 2)) {
    throw DomainError("T decomposition needs 1 <= r <= (n-2)/2, got " + permball::to_string(spec));
  }
}

inline TDecomposition t_decomposition_closed(const BallSpec& spec) {
  require_second_low(spec);
  const int n = spec.n;
  const int r = spec.r;
  const AlphaRoot root = alpha_low_root(r);
  const double c = root.excess / (2.0 + root.excess);
  const double log_c = std::log2(c);
  const double log_a = std::log1p(root.excess) * kLog2E;
  const SrSums s = sr_sums(r);
  TDecomposition out;
  out.t[0] = c * s.s0 * s.s0 * log_c + 2.0 * c * s.s0 * s.s1 * log_a;
  out.t[1] = c * s.s1 * log_c + c * s.s2 * log_a;
  out.t[2] = (n - 2 * r - 2) * (c * (2.0 * s.s0 - 1.0) * log_c + 2.0 * c * s.s1 * log_a);
  out.t[3] = out.t[1];
  out.t[4] = out.t[0];
  return out;
}

inline TDecomposition t_decomposition_direct(const BallSpec& spec) {
  require_second_low(spec);
  const int n = spec.n;
  const int r = spec.r;
  const SecondLowKernel q(spec);
  std::array<detail::CompensatedSum, 5> acc;
  auto add = [&](int k, int i, int j) { acc[static_cast<std::size_t>(k)].add(q.q_log2_q(i, j)); };
  for (int j = 1; j <= r + 1; ++j)
    for (int i = 1; i <= r + 1; ++i) add(0, i, j);
  for (int j = 2; j <= r + 1; ++j)
    for (int i = r + 2; i <= j + r; ++i) add(1, i, j);
  for (int j = r + 2; j <= n - r - 1; ++j)
    for (int i = j - r; i <= j + r; ++i) add(2, i, j);
  for (int j = n - r; j <= n - 1; ++j)
    for (int i = j - r; i <= n - r - 1; ++i) add(3, i, j);
  for (int j = n - r; j <= n; ++j)
    for (int i = n - r; i <= n; ++i) add(4, i, j);
  TDecomposition out;
  for (std::size_t k = 0; k < 5; ++k) out.t[k] = acc[k].value();
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form families.

namespace detail {

inline bool low_branch(int n, int r) { return 2 * r <= n - 1; }

// Running sum of (2/i) log2 i! for i in [from, to].
inline double weighted_factorial_sum(int from, int to) {
  CompensatedSum sum;
  double log_fact = log2_factorial(from - 1).value;
  for (int i = from; i <= to; ++i) {
    log_fact += std::log2(static_cast<double>(i));
    sum.add(2.0 / i * log_fact);
  }
  return sum.value();
}

inline double upper_Phi1(int n, int r) {
  if (low_branch(n, r)) {
    return static_cast<double>(n - 2 * r) / (2 * r + 1) * log2_factorial(2 * r + 1).value +
           weighted_factorial_sum(r + 1, 2 * r);
  }
  return static_cast<double>(2 * r + 2 - n) / n * log2_factorial(n).value + weighted_factorial_sum(r + 1, n - 1);
}

inline double lower_phi1(int n, int r) {
  const double base = log2_factorial(n).value + n * std::log2(2.0 * r + 1.0) - n * std::log2(static_cast<double>(n));
  return low_branch(n, r) ? base - 2.0 * r : base - n;
}

inline double lower_phi2(int n, int r) {
  if (low_branch(n, r)) {
    return log2_factorial(n).value - 2.0 * r * (r + 1) / (2 * r + 1) +
           n * std::log2((2.0 * r + 1.0) / n);
  }
  return log2_factorial(n).value - 2.0 * (n - r - 1) * (n - r) / n;
}

// 0.5 log2(2 pi (n+2r)) - 2 log2 omega_r + n (log2(2r+1) - log2 e),
// log2 omega_r = log2 Omega_r + r log2 e - r log2(2r+1).
inline double lower_phi1_prime(int n, int r) {
  const double log_omega = log2_omega_r(r).value + r * kLog2E - r * std::log2(2.0 * r + 1.0);
  return 0.5 * std::log2(2.0 * std::numbers::pi * (n + 2.0 * r)) - 2.0 * log_omega +
         n * (std::log2(2.0 * r + 1.0) - kLog2E);
}

inline double lower_phi3_high(int n, int r) {
  const AlphaRoot a = alpha_high_root(n, r);
  return log2_factorial(n).value - n * std::log2(static_cast<double>(n)) - n * std::log2(a.excess) +
         static_cast<double>(n - r) * (2 * r - n + 2) * std::log1p(a.excess) * kLog2E;
}

}  // namespace detail

// phi3 in the low range, closed form log2(n!/n^n) - T.
inline Bits phi3_low_closed(const BallSpec& spec) {
  return Bits(log2_factorial(spec.n).value - spec.n * std::log2(static_cast<double>(spec.n)) -
              t_decomposition_closed(spec).total());
}

// phi3 in the high range evaluated through the generic functional.
inline Bits phi3_high_generic(const BallSpec& spec) {
  return vdw_sinkhorn_bound(BandMatrix(spec), SecondHighKernel(spec));
}

inline BoundValue finite_bound(Family family, const BallSpec& spec) {
  BoundValue out;
  out.family = family;
  out.direction = direction_of(family);
  out.spec = spec;
  const int n = spec.n;
  const int r = spec.r;
  auto invalid = [&](std::string why) {
    out.valid = false;
    out.reason = std::move(why);
    return out;
  };
  switch (family) {
    case Family::phi1:
      out.bits = Bits(detail::lower_phi1(n, r));
      break;
    case Family::Phi1:
      out.bits = Bits(detail::upper_Phi1(n, r));
      break;
    case Family::phi2:
      out.bits = Bits(detail::lower_phi2(n, r));
      break;
    case Family::phi1_prime:
      if (!(r >= 1 && 2 * r <= n - 1)) return invalid("phi1_prime requires 0 < rho <= 1/2");
      out.bits = Bits(detail::lower_phi1_prime(n, r));
      break;
    case Family::phi3:
      if (r >= 1 && 2 * r <= n - 2) {
        // Defined as the generic functional at the second-class low Q.
        out.bits = vdw_sinkhorn_bound(BandMatrix(spec), SecondLowKernel(spec));
      } else if (spec.strictly_high()) {
        out.bits = Bits(detail::lower_phi3_high(n, r));
      } else {
        return invalid("phi3 requires 1 <= r <= (n-2)/2 or (n-1)/2 < r < n-1");
      }
      break;
    case Family::vdw_generic:
    case Family::bethe_generic: {
      if (n > kGenericFamilyMaxN) {
        return invalid("generic families use a dense Sinkhorn solve, limited to n <= " +
                       std::to_string(kGenericFamilyMaxN));
      }
      const BandMatrix a(spec);
      const SinkhornResult balanced = sinkhorn_balance(a, 1e-12);
      out.bits = family == Family::vdw_generic ? vdw_sinkhorn_bound(a, balanced.matrix)
                                               : bethe_bound(a, balanced.matrix);
      break;
    }
  }
  out.valid = true;
  return out;
}

}  // namespace permball
