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

// Asymptotic exponents and gap curves.
//
// Every family is normalized as log2 bound = n log2 n - n E(rho) + o(n), so
// a gap between a lower family and Phi1 is E_lower(rho) - E_Phi1(rho).

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "permball/bounds.hpp"
#include "permball/errors.hpp"
#include "permball/scalar.hpp"

namespace permball {

struct Exponent {
  Family family = Family::phi1;
  double rho = 0.0;
  Bits e_value;
};

namespace detail {

inline void require_open_unit(double rho, const char* what) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError(std::string(what) + ": rho must lie in (0,1)");
}

inline double log2_l() { return std::log2(kLog2E); }

}  // namespace detail

inline Exponent exponent(Family family, double rho) {
  detail::require_open_unit(rho, "exponent");
  const double L = kLog2E;
  const bool low = rho <= 0.5;
  double e = 0.0;
  switch (family) {
    case Family::phi1:
      e = low ? L - 1.0 + 2.0 * rho - std::log2(rho) : L - std::log2(rho);
      break;
    case Family::Phi1:
      e = low ? (L - 1.0) * (2.0 * rho + 1.0) - std::log2(rho) : L * (3.0 - 2.0 * rho) + 2.0 * rho * std::log2(rho);
      break;
    case Family::phi2:
      e = low ? L - 1.0 + rho - std::log2(rho) : L + 2.0 * (1.0 - rho) * (1.0 - rho);
      break;
    case Family::phi3:
      if (low) {
        e = (L - 1.0) * 2.0 * rho - std::log2(rho) - detail::log2_l() + 1.0;
      } else {
        const double t = t_hat(rho);
        e = std::log2(std::numbers::e * t / L) - t * (2.0 * rho - 1.0) - std::log2(1.0 - rho);
      }
      break;
    case Family::phi1_prime: {
      if (!low) throw DomainError("phi1_prime exponent is defined for rho <= 1/2 only");
      const double mu = mu_star();
      e = (L - 1.0) * (2.0 * rho + 1.0) - std::log2(rho) +
          2.0 * (binary_entropy(mu).value + std::log2(mu)) * rho;
      break;
    }
    case Family::vdw_generic:
    case Family::bethe_generic:
      throw DomainError("no closed-form exponent for " + to_string(family));
  }
  return Exponent{family, rho, Bits(e)};
}

// Lower families compared against Phi1.
enum class GapPair { phi1, phi1_prime, phi2, phi3 };

inline constexpr std::array<GapPair, 4> kAllGapPairs = {GapPair::phi1, GapPair::phi1_prime, GapPair::phi2,
                                                       GapPair::phi3};

inline Family family_of(GapPair p) {
  switch (p) {
    case GapPair::phi1: return Family::phi1;
    case GapPair::phi1_prime: return Family::phi1_prime;
    case GapPair::phi2: return Family::phi2;
    case GapPair::phi3: return Family::phi3;
  }
  return Family::phi1;
}

inline std::string to_string(GapPair p) { return to_string(family_of(p)); }

inline std::optional<GapPair> gap_pair_from_string(std::string_view s) {
  for (GapPair p : kAllGapPairs)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

// phi1_prime is only defined below 1/2.
inline bool in_gap_range(GapPair p, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) return false;
  return p != GapPair::phi1_prime || rho < 0.5;
}

struct GapCurvePoint {
  GapPair pair = GapPair::phi1;
  double rho = 0.0;
  Bits gap_bits;
};

// Closed forms of the four gaps, independent of exponent().
inline double gap_closed_form(GapPair pair, double rho) {
  const double L = kLog2E;
  const bool low = rho <= 0.5;
  switch (pair) {
    case GapPair::phi1:
      return low ? (4.0 - 2.0 * L) * rho : 2.0 * (rho - 1.0) * L - (2.0 * rho + 1.0) * std::log2(rho);
    case GapPair::phi2:
      return low ? (3.0 - 2.0 * L) * rho
                 : 2.0 * (1.0 - rho) * (1.0 - rho - L) - 2.0 * rho * std::log2(rho);
    case GapPair::phi3: {
      if (low) return std::log2(4.0 / (std::numbers::e * L));
      const double t = t_hat(rho);
      return std::log2(t / L) - t * (2.0 * rho - 1.0) - std::log2(1.0 - rho) - 2.0 * (1.0 - rho) * L -
             2.0 * rho * std::log2(rho);
    }
    case GapPair::phi1_prime: {
      const double mu = mu_star();
      return 2.0 * (binary_entropy(mu).value + std::log2(mu)) * rho;
    }
  }
  return 0.0;
}

inline constexpr double kGapAgreementTolerance = 1e-9;

// The closed form, checked against the exponent difference.
inline GapCurvePoint gap(GapPair pair, double rho) {
  if (!in_gap_range(pair, rho)) {
    throw DomainError("gap(" + to_string(pair) + ") undefined at rho=" + std::to_string(rho));
  }
  const double closed = gap_closed_form(pair, rho);
  const double diff = exponent(family_of(pair), rho).e_value.value - exponent(Family::Phi1, rho).e_value.value;
  if (std::fabs(closed - diff) > kGapAgreementTolerance) {
    throw std::logic_error("gap(" + to_string(pair) + ") closed form " + std::to_string(closed) +
                           " disagrees with exponent difference " + std::to_string(diff));
  }
  return GapCurvePoint{pair, rho, Bits(closed)};
}

// Where the phi2 and phi3 gap curves cross below 1/2.
inline double crossover_xi() {
  const double L = kLog2E;
  const double xi = (2.0 - L - std::log2(L)) / (3.0 - 2.0 * L);
  const double d = gap(GapPair::phi2, xi).gap_bits.value - gap(GapPair::phi3, xi).gap_bits.value;
  if (std::fabs(d) > kGapAgreementTolerance) {
    throw std::logic_error("phi2 and phi3 gaps differ by " + std::to_string(d) + " at xi");
  }
  return xi;
}

struct GapCurveTable {
  std::vector<GapCurvePoint> points;
  std::vector<std::string> notices;  // one per skipped (pair, rho)
};

// Points are ordered by rho, then by pair in the order given.
inline GapCurveTable gap_curve_table(const std::vector<GapPair>& pairs, const std::vector<double>& rho_grid) {
  GapCurveTable table;
  for (double rho : rho_grid) {
    for (GapPair p : pairs) {
      if (!in_gap_range(p, rho)) {
        table.notices.push_back("skipped " + to_string(p) + " at rho=" + std::to_string(rho) + " (out of range)");
        continue;
      }
      table.points.push_back(gap(p, rho));
    }
  }
  return table;
}

// k * step for k = 1.. while below 1, as an open-interval grid.
inline std::vector<double> open_unit_grid(double step) {
  if (!(step > 0.0 && step < 1.0)) throw ValidationError("grid step must lie in (0,1)");
  std::vector<double> grid;
  const int count = static_cast<int>(std::ceil(1.0 / step - 1e-9));
  // Dividing keeps points like 0.5 exact when 1/step is an integer.
  const bool exact = std::fabs(count * step - 1.0) < 1e-9;
  for (int k = 1; k < count; ++k) grid.push_back(exact ? static_cast<double>(k) / count : k * step);
  return grid;
}

}  // namespace permball
