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

#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "permball/core.hpp"

namespace permball {
namespace {

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

TEST(Permutation, RejectsNonPermutations) {
  EXPECT_THROW(Permutation({1, 1}), ValidationError);
  EXPECT_THROW(Permutation({0, 1}), ValidationError);
  EXPECT_THROW(Permutation(std::vector<int>{}), ValidationError);
  EXPECT_NO_THROW(Permutation({2, 1}));
}

TEST(Permutation, ParseAndPrint) {
  const Permutation p = Permutation::parse("3,1,2");
  EXPECT_EQ(p(1), 3);
  EXPECT_EQ(p(3), 2);
  EXPECT_EQ(p.to_string(), "3,1,2");
  EXPECT_EQ(Permutation::parse(" 2, 1 ").to_string(), "2,1");
  EXPECT_THROW(Permutation::parse("1,,2"), ValidationError);
  EXPECT_THROW(Permutation::parse("1,x"), ValidationError);
}

TEST(Permutation, Compose) {
  const Permutation f = Permutation::parse("2,3,1");
  const Permutation g = Permutation::parse("3,1,2");
  EXPECT_EQ(f.compose(g), Permutation::identity(3));
}

TEST(InfinityDistance, Examples) {
  EXPECT_EQ(infinity_distance(Permutation::parse("1,2,3"), Permutation::parse("1,2,3")), 0);
  EXPECT_EQ(infinity_distance(Permutation::parse("2,1"), Permutation::parse("1,2")), 1);
  EXPECT_EQ(infinity_distance(Permutation::parse("3,1,2"), Permutation::parse("1,2,3")), 2);
}

TEST(InfinityDistance, LengthMismatch) {
  EXPECT_THROW(infinity_distance(Permutation::identity(2), Permutation::identity(3)), DimensionError);
}

TEST(InfinityDistance, IsAMetricUpToFive) {
  for (int n = 1; n <= 5; ++n) {
    const auto perms = all_permutations(n);
    for (const auto& f : perms) {
      for (const auto& g : perms) {
        const int d = infinity_distance(f, g);
        EXPECT_EQ(d == 0, f == g);
        EXPECT_EQ(d, infinity_distance(g, f));
        EXPECT_LE(d, n - 1);
        if (n <= 4) {
          for (const auto& h : perms) EXPECT_LE(d, infinity_distance(f, h) + infinity_distance(h, g));
        }
      }
    }
  }
}

TEST(InfinityDistance, RightInvariantUpToFive) {
  for (int n = 1; n <= 5; ++n) {
    const auto perms = all_permutations(n);
    for (const auto& f : perms)
      for (const auto& g : perms)
        for (const auto& h : perms) ASSERT_EQ(infinity_distance(f.compose(h), g.compose(h)), infinity_distance(f, g));
  }
}

TEST(BallSpec, Validation) {
  EXPECT_THROW(BallSpec(0, 0), ValidationError);
  EXPECT_THROW(BallSpec(4, 4), ValidationError);
  EXPECT_THROW(BallSpec(4, -1), ValidationError);
  const BallSpec s(5, 2);
  EXPECT_DOUBLE_EQ(s.rho(), 0.5);
  EXPECT_TRUE(s.low_regime());
  EXPECT_TRUE(s.high_regime());
  EXPECT_FALSE(s.strictly_high());
  EXPECT_TRUE(BallSpec(6, 3).strictly_high());
  EXPECT_FALSE(BallSpec(6, 5).strictly_high());
}

TEST(BandEntry, Examples) {
  EXPECT_EQ(band_entry(BallSpec(5, 2), 1, 3), 1);
  EXPECT_EQ(band_entry(BallSpec(5, 2), 1, 4), 0);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) EXPECT_EQ(band_entry(BallSpec(4, 3), i, j), 1);
  EXPECT_THROW(band_entry(BallSpec(4, 1), 0, 1), DimensionError);
  EXPECT_THROW(band_entry(BallSpec(4, 1), 1, 5), DimensionError);
}

TEST(BandMatrix, SymmetricWithBoundedRowCounts) {
  for (int n = 1; n <= 12; ++n) {
    for (int r = 0; r < n; ++r) {
      const BandMatrix a(BallSpec(n, r));
      for (int i = 1; i <= n; ++i) {
        int ones = 0;
        for (int j = 1; j <= n; ++j) {
          EXPECT_EQ(a.entry(i, j), a.entry(j, i));
          ones += a.entry(i, j);
        }
        EXPECT_GE(ones, r + 1);
        EXPECT_LE(ones, 2 * r + 1);
        EXPECT_EQ(ones, a.row_end(i) - a.row_begin(i) + 1);
      }
    }
  }
}

TEST(NormalizedRadius, Parse) {
  EXPECT_EQ(NormalizedRadius::parse("1/2").value(), Rational(1, 2));
  EXPECT_EQ(NormalizedRadius::parse("0.25").value(), Rational(1, 4));
  EXPECT_EQ(NormalizedRadius::parse("1").value(), Rational(1));
  EXPECT_EQ(NormalizedRadius::parse("0.000001").value(), Rational(1, 1000000));
  EXPECT_THROW(NormalizedRadius::parse("0.0000001"), ValidationError);
  EXPECT_THROW(NormalizedRadius::parse("3/2"), ValidationError);
  EXPECT_THROW(NormalizedRadius::parse("abc"), ValidationError);
  EXPECT_THROW(NormalizedRadius::parse("1/0"), ValidationError);
}

TEST(RadiusFromRho, Examples) {
  EXPECT_EQ(radius_from_rho(NormalizedRadius(1, 2), 5), BallSpec(5, 2));
  EXPECT_EQ(radius_from_rho(NormalizedRadius(1, 1), 7), BallSpec(7, 6));
  try {
    radius_from_rho(NormalizedRadius(1, 2), 6);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("2.5"), std::string::npos) << msg;
    EXPECT_NE(msg.find("nearest admissible n is 5"), std::string::npos) << msg;
  }
}

TEST(RadiusFromRho, NeverRounds) {
  for (int n = 1; n <= 40; ++n) {
    for (int den = 1; den <= 8; ++den) {
      for (int num = 0; num <= den; ++num) {
        const NormalizedRadius rho(num, den);
        if ((static_cast<long>(num) * (n - 1)) % den == 0) {
          EXPECT_EQ(radius_from_rho(rho, n).r * den, num * (n - 1));
        } else {
          EXPECT_THROW(radius_from_rho(rho, n), ValidationError);
          const int m = nearest_admissible_n(rho, n);
          EXPECT_NO_THROW(radius_from_rho(rho, m));
        }
      }
    }
  }
}

TEST(ToRational, RecoversSimpleFractions) {
  EXPECT_EQ(to_rational(0.75), Rational(3, 4));
  EXPECT_EQ(to_rational(0.1), Rational(1, 10));
  EXPECT_EQ(to_rational(1.0 / 3.0), Rational(1, 3));
  EXPECT_EQ(to_rational(0.0), Rational(0));
}

}  // namespace
}  // namespace permball
