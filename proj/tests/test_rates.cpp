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

#include "permball/rates.hpp"

namespace permball {
namespace {

constexpr double kEccNew08 = 0.70462271376467207;
constexpr double kCoverNew075 = 0.10590232991587649;

double rate(RateKind k, double x, const RateMode& mode = RateMode::asymptotic()) {
  return rate_table({k}, {x}, mode).front().rate_bits.value;
}

TEST(Rates, Examples) {
  EXPECT_NEAR(rate(RateKind::ecc_old, 0.5), 1.5, 1e-14);
  EXPECT_NEAR(rate(RateKind::ecc_new, 0.4), 0.2 + std::log2(2.5), 1e-14);
  EXPECT_NEAR(rate(RateKind::ecc_new, 0.8), kEccNew08, 1e-12);
  EXPECT_NEAR(rate(RateKind::cover_new, 0.75), kCoverNew075, 1e-12);
  EXPECT_NEAR(rate(RateKind::cover_old, 0.75), 0.5, 1e-14);
  EXPECT_NEAR(rate(RateKind::cover_old, 0.25), 2.5, 1e-14);
  EXPECT_THROW(ecc_rate_upper(0.0, RateVariant::new_bound), DomainError);
  EXPECT_THROW(covering_rate_upper(1.0, RateVariant::new_bound), DomainError);
}

TEST(Rates, NewNeverWorseThanOld) {
  for (int k = 1; k <= 1000; ++k) {
    const double x = k / 1000.0;
    ASSERT_LE(rate(RateKind::ecc_new, x), rate(RateKind::ecc_old, x) + 1e-12) << x;
    if (k < 1000) { ASSERT_LE(rate(RateKind::cover_new, x), rate(RateKind::cover_old, x) + 1e-12) << x; }
  }
}

TEST(Rates, ContinuousAtBreakpoints) {
  const double xi = crossover_xi();
  for (double x : {xi, 0.5}) {
    EXPECT_NEAR(cover_new_asymptotic(x - 1e-10), cover_new_asymptotic(x + 1e-10), 1e-8) << x;
  }
  EXPECT_NEAR(ecc_new_asymptotic(2 * xi - 1e-10), ecc_new_asymptotic(2 * xi + 1e-10), 1e-7);
}

TEST(Rates, PositiveAndDecreasing) {
  double prev_ecc = INFINITY, prev_cov = INFINITY;
  for (int k = 1; k < 1000; ++k) {
    const double x = k / 1000.0;
    const double e = rate(RateKind::ecc_new, x);
    const double c = rate(RateKind::cover_new, x);
    ASSERT_GT(e, 0.0);
    ASSERT_GT(c, 0.0);
    ASSERT_LE(e, prev_ecc + 1e-12) << x;
    ASSERT_LE(c, prev_cov + 1e-12) << x;
    prev_ecc = e;
    prev_cov = c;
  }
}

TEST(Rates, EccRadiusIsExact) {
  EXPECT_EQ(ecc_radius(0.5, 11), 2);   // (5-1)/2
  EXPECT_EQ(ecc_radius(0.3, 11), 1);   // exactly 1, no float drift below
  EXPECT_EQ(ecc_radius(1.0, 10), 4);
  EXPECT_THROW(ecc_radius(0.1, 5), DomainError);
}

TEST(Rates, FiniteOracleBeatsFiniteBounds) {
  for (int n = 3; n <= 10; ++n) {
    for (int d = 1; d <= n - 1; ++d) {
      const double delta = static_cast<double>(d) / (n - 1);
      if ((d - 1) < 0) continue;
      for (RateVariant v : {RateVariant::old_bound, RateVariant::new_bound}) {
        const auto exact = ecc_rate_upper(delta, v, RateMode::finite(n, BallSource::oracle));
        const auto bound = ecc_rate_upper(delta, v, RateMode::finite(n, BallSource::bounds));
        ASSERT_TRUE(exact.approximate);
        ASSERT_EQ(exact.n, n);
        ASSERT_LE(exact.rate_bits.value, bound.rate_bits.value + 1e-12) << n << " " << delta;
      }
    }
    for (int r = 1; r < n - 1; ++r) {
      const double rho = static_cast<double>(r) / (n - 1);
      if (!(rho > 0 && rho < 1)) continue;
      for (RateVariant v : {RateVariant::old_bound, RateVariant::new_bound}) {
        const auto exact = covering_rate_upper(rho, v, RateMode::finite(n, BallSource::oracle));
        const auto bound = covering_rate_upper(rho, v, RateMode::finite(n, BallSource::bounds));
        ASSERT_LE(exact.rate_bits.value, bound.rate_bits.value + 1e-12) << n << " " << rho;
      }
    }
  }
}

TEST(Rates, FiniteNewBeatsFiniteOld) {
  for (int n : {21, 41, 101}) {
    for (double rho : {0.25, 0.5, 0.75}) {
      EXPECT_LE(covering_rate_upper(rho, RateVariant::new_bound, RateMode::finite(n)).rate_bits.value,
                covering_rate_upper(rho, RateVariant::old_bound, RateMode::finite(n)).rate_bits.value + 1e-12);
    }
  }
}

TEST(Rates, TableOrdering) {
  const auto t = rate_table({RateKind::ecc_new, RateKind::ecc_old}, {0.25, 0.5});
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].kind, RateKind::ecc_new);
  EXPECT_EQ(t[1].kind, RateKind::ecc_old);
  EXPECT_EQ(t[2].x, 0.5);
  EXPECT_FALSE(t[0].n.has_value());
  EXPECT_FALSE(t[0].approximate);
}

}  // namespace
}  // namespace permball
