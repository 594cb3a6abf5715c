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

// Rate upper bounds for permutation codes under the infinity metric:
// ball packing for error-correcting codes (normalized distance delta) and
// the covering bound (normalized covering radius rho). Rates are in bits
// per symbol. The finite forms are
//
//   ECC:      (1/n) (log2 n! - log2 |B_{floor((delta(n-1)-1)/2), n}|)
//   covering: (1/n) (log2 n! + log2(1 + ln n!) - log2 |B_{rho(n-1), n}|)

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "permball/asym.hpp"
#include "permball/bounds.hpp"
#include "permball/core.hpp"
#include "permball/errors.hpp"
#include "permball/oracle.hpp"
#include "permball/scalar.hpp"

namespace permball {

enum class RateKind { ecc_old, ecc_new, cover_old, cover_new };

inline std::string to_string(RateKind k) {
  switch (k) {
    case RateKind::ecc_old: return "ecc_old";
    case RateKind::ecc_new: return "ecc_new";
    case RateKind::cover_old: return "cover_old";
    case RateKind::cover_new: return "cover_new";
  }
  return "?";
}

enum class RateVariant { old_bound, new_bound };

// Where a finite-mode |B| comes from: the exact oracle, or the lower-bound
// families (phi1 for the old variant, the better of phi2/phi3 for the new).
enum class BallSource { oracle, bounds };

struct RateMode {
  std::optional<int> n;  // empty: asymptotic
  BallSource source = BallSource::bounds;

  static RateMode asymptotic() { return {}; }
  static RateMode finite(int n, BallSource source = BallSource::bounds) { return RateMode{n, source}; }
  bool is_finite() const { return n.has_value(); }
};

struct RatePoint {
  RateKind kind = RateKind::ecc_old;
  double x = 0.0;
  Bits rate_bits;
  std::optional<int> n;
  // Finite-mode values inherit the d/(n-1) vs d/n normalization slack.
  bool approximate = false;
};

namespace detail {

inline RateKind ecc_kind(RateVariant v) { return v == RateVariant::old_bound ? RateKind::ecc_old : RateKind::ecc_new; }
inline RateKind cover_kind(RateVariant v) {
  return v == RateVariant::old_bound ? RateKind::cover_old : RateKind::cover_new;
}

// log2 |B| or a lower bound on it.
inline double log2_ball(const BallSpec& spec, RateVariant variant, BallSource source) {
  if (source == BallSource::oracle) return ball_size_exact(spec).count.log2();
  if (variant == RateVariant::old_bound) return finite_bound(Family::phi1, spec).bits.value;
  double best = finite_bound(Family::phi2, spec).bits.value;
  const BoundValue p3 = finite_bound(Family::phi3, spec);
  if (p3.valid) best = std::max(best, p3.bits.value);
  return best;
}

}  // namespace detail

inline double ecc_old_asymptotic(double delta) { return delta + std::log2(1.0 / delta); }

inline double ecc_new_asymptotic(double delta) {
  const double L = kLog2E;
  if (delta / 2.0 <= crossover_xi()) return delta / 2.0 + std::log2(1.0 / delta);
  return (L - 1.0) * (delta - 1.0) + std::log2(1.0 / delta) + 1.0 - std::log2(L);
}

inline double cover_old_asymptotic(double rho) {
  return rho <= 0.5 ? 2.0 * rho + std::log2(1.0 / rho) : 2.0 * (1.0 - rho);
}

inline double cover_new_asymptotic(double rho) {
  const double L = kLog2E;
  if (rho <= crossover_xi()) return rho - 1.0 + std::log2(1.0 / rho);
  if (rho <= 0.5) return (2.0 * rho - 1.0) * (L - 1.0) + std::log2(1.0 / rho) - std::log2(L);
  const double t = t_hat(rho);
  return std::log2(t) - std::log2(L) - (2.0 * rho - 1.0) * t - std::log2(1.0 - rho);
}

// Radius floor((delta(n-1)-1)/2), computed on the exact rational form of delta.
inline int ecc_radius(double delta, int n) {
  const Rational d = to_rational(delta);
  const Rational arg = (d * Rational(n - 1) - Rational(1)) / Rational(2);
  if (arg < 0) {
    throw DomainError("delta=" + std::to_string(delta) + " gives a negative radius at n=" + std::to_string(n));
  }
  return static_cast<int>(arg.numerator() / arg.denominator());
}

inline RatePoint ecc_rate_upper(double delta, RateVariant variant, const RateMode& mode = RateMode::asymptotic()) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("ecc_rate_upper: delta must lie in (0,1]");
  RatePoint p;
  p.kind = detail::ecc_kind(variant);
  p.x = delta;
  if (!mode.is_finite()) {
    p.rate_bits = Bits(variant == RateVariant::old_bound ? ecc_old_asymptotic(delta) : ecc_new_asymptotic(delta));
    return p;
  }
  const int n = *mode.n;
  const BallSpec spec(n, ecc_radius(delta, n));
  p.n = n;
  p.approximate = true;
  p.rate_bits = Bits((log2_factorial(n).value - detail::log2_ball(spec, variant, mode.source)) / n);
  return p;
}

inline RatePoint covering_rate_upper(double rho, RateVariant variant,
                                     const RateMode& mode = RateMode::asymptotic()) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("covering_rate_upper: rho must lie in (0,1)");
  RatePoint p;
  p.kind = detail::cover_kind(variant);
  p.x = rho;
  if (!mode.is_finite()) {
    p.rate_bits = Bits(variant == RateVariant::old_bound ? cover_old_asymptotic(rho) : cover_new_asymptotic(rho));
    return p;
  }
  const int n = *mode.n;
  const BallSpec spec = radius_from_rho(NormalizedRadius(to_rational(rho)), n);
  const double log_fact = log2_factorial(n).value;
  p.n = n;
  p.approximate = true;
  p.rate_bits = Bits((log_fact + std::log2(1.0 + log_fact * kLn2) - detail::log2_ball(spec, variant, mode.source)) / n);
  return p;
}

// Grid order: x ascending, then kinds in the order given.
inline std::vector<RatePoint> rate_table(const std::vector<RateKind>& kinds, const std::vector<double>& grid,
                                         const RateMode& mode = RateMode::asymptotic()) {
  std::vector<RatePoint> out;
  for (double x : grid) {
    for (RateKind k : kinds) {
      switch (k) {
        case RateKind::ecc_old: out.push_back(ecc_rate_upper(x, RateVariant::old_bound, mode)); break;
        case RateKind::ecc_new: out.push_back(ecc_rate_upper(x, RateVariant::new_bound, mode)); break;
        case RateKind::cover_old: out.push_back(covering_rate_upper(x, RateVariant::old_bound, mode)); break;
        case RateKind::cover_new: out.push_back(covering_rate_upper(x, RateVariant::new_bound, mode)); break;
      }
    }
  }
  return out;
}

}  // namespace permball
