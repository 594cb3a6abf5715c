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

#include <cmath>

#include <gtest/gtest.h>

#include "permball/asym.hpp"

namespace permball {
namespace {

constexpr double kXi = 0.24900625189210385;
constexpr double kPhi1PrimeGapHalf = 0.40173941490481386;
constexpr double kPhi3GapLow = 0.028538586166138980;
constexpr double kPhi3Exponent075 = 1.5485973708048399;

TEST(Exponent, Examples) {
  const double L = kLog2E;
  EXPECT_NEAR(exponent(Family::phi1, 0.5).e_value.value, L + 1.0, 1e-14);
  EXPECT_NEAR(exponent(Family::Phi1, 0.5).e_value.value, 2.0 * L - 1.0, 1e-14);
  EXPECT_NEAR(exponent(Family::phi3, 0.75).e_value.value, kPhi3Exponent075, 1e-12);
  EXPECT_THROW(exponent(Family::phi1, 0.0), DomainError);
  EXPECT_THROW(exponent(Family::phi1_prime, 0.6), DomainError);
  EXPECT_THROW(exponent(Family::vdw_generic, 0.3), DomainError);
}

TEST(Gap, Examples) {
  EXPECT_NEAR(gap(GapPair::phi3, 0.3).gap_bits.value, kPhi3GapLow, 1e-14);
  EXPECT_NEAR(gap(GapPair::phi3, 0.1).gap_bits.value, std::log2(4.0 / (std::numbers::e * kLog2E)), 1e-14);
  EXPECT_NEAR(gap(GapPair::phi1_prime, 0.4999999).gap_bits.value, kPhi1PrimeGapHalf, 1e-6);
  EXPECT_NEAR(gap(GapPair::phi1, 0.5).gap_bits.value, 2.0 - kLog2E, 1e-14);
  EXPECT_THROW(gap(GapPair::phi1_prime, 0.5), DomainError);
  EXPECT_THROW(gap(GapPair::phi2, 1.0), DomainError);
}

TEST(Gap, ClosedFormsMatchExponentDifferences) {
  for (int k = 1; k < 1000; ++k) {
    const double rho = k / 1000.0;
    for (GapPair p : kAllGapPairs) {
      if (!in_gap_range(p, rho)) continue;
      const double diff =
          exponent(family_of(p), rho).e_value.value - exponent(Family::Phi1, rho).e_value.value;
      ASSERT_NEAR(gap_closed_form(p, rho), diff, 1e-9) << to_string(p) << " " << rho;
    }
  }
}

TEST(Gap, NonNegativeAndOrdered) {
  for (int k = 1; k < 1000; ++k) {
    const double rho = k / 1000.0;
    const double g1 = gap(GapPair::phi1, rho).gap_bits.value;
    const double g2 = gap(GapPair::phi2, rho).gap_bits.value;
    const double g3 = gap(GapPair::phi3, rho).gap_bits.value;
    ASSERT_GE(g1, -1e-12);
    ASSERT_GE(g2, -1e-12);
    ASSERT_GE(g3, -1e-12);
    ASSERT_GE(g1, g2 - 1e-12) << rho;
    if (rho >= kXi) { ASSERT_GE(g2, g3 - 1e-12) << rho; }
    if (rho < 0.5) { ASSERT_GE(gap(GapPair::phi1_prime, rho).gap_bits.value, -1e-12); }
  }
}

TEST(Gap, ContinuousAtOneHalf) {
  for (GapPair p : {GapPair::phi1, GapPair::phi2, GapPair::phi3}) {
    EXPECT_NEAR(gap(p, 0.5).gap_bits.value, gap(p, 0.5 + 1e-9).gap_bits.value, 1e-6) << to_string(p);
    EXPECT_NEAR(exponent(family_of(p), 0.5).e_value.value, exponent(family_of(p), 0.5 + 1e-9).e_value.value, 1e-6);
  }
  EXPECT_NEAR(exponent(Family::Phi1, 0.5).e_value.value, exponent(Family::Phi1, 0.5 + 1e-9).e_value.value, 1e-6);
}

TEST(Crossover, MatchesBisection) {
  EXPECT_NEAR(crossover_xi(), kXi, 1e-14);
  double lo = 0.01, hi = 0.49;
  auto f = [](double r) { return gap(GapPair::phi2, r).gap_bits.value - gap(GapPair::phi3, r).gap_bits.value; };
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) < 0) == (f(lo) < 0) ? lo : hi) = mid;
  }
  EXPECT_NEAR(crossover_xi(), 0.5 * (lo + hi), 1e-12);
}

TEST(GapCurveTable, OrderingAndNotices) {
  const auto grid = open_unit_grid(0.25);
  ASSERT_EQ(grid.size(), 3u);
  EXPECT_EQ(grid[1], 0.5);
  const GapCurveTable t = gap_curve_table({GapPair::phi2, GapPair::phi1_prime}, grid);
  EXPECT_EQ(t.points.size(), 4u);
  ASSERT_EQ(t.notices.size(), 2u);
  EXPECT_NE(t.notices[0].find("phi1_prime"), std::string::npos);
  EXPECT_EQ(t.points[0].pair, GapPair::phi2);
  EXPECT_EQ(t.points[1].pair, GapPair::phi1_prime);
  EXPECT_EQ(t.points[2].rho, 0.5);
  EXPECT_EQ(open_unit_grid(0.01).size(), 99u);
  EXPECT_EQ(open_unit_grid(0.01)[49], 0.5);
  EXPECT_THROW(open_unit_grid(0.0), ValidationError);
}

TEST(GapPair, StringRoundTrip) {
  for (GapPair p : kAllGapPairs) EXPECT_EQ(gap_pair_from_string(to_string(p)), p);
  EXPECT_FALSE(gap_pair_from_string("Phi1").has_value());
}

}  // namespace
}  // namespace permball
