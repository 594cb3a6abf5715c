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

#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "permball/io.hpp"

namespace permball {
namespace {

Table sample() {
  Table t;
  t.metadata = {"permball test", "second line, with a comma"};
  t.header = schemas::sweep().header();
  t.rows.push_back({"5", "2", "0.5", "phi1", "lower", format_real(2.9068905956085185), "true", "", "31", "4.954196310386876",
                    "band_dp", "ok"});
  t.rows.push_back({"5", "2", "0.5", "phi3", "lower", "", "false", "needs \"r\" off the midpoint, strictly", "31",
                    "4.954196310386876", "band_dp", "ok"});
  return t;
}

TEST(FormatReal, RoundTripsExactly) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 10000; ++k) {
    const double x = u(rng) * std::exp(u(rng) / 1e5);
    ASSERT_EQ(parse_real(format_real(x)), x);
  }
  EXPECT_EQ(format_real(0.5), "0.5");
  EXPECT_EQ(format_real(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_THROW(parse_real("1.5x"), ValidationError);
}

TEST(Csv, RoundTrip) {
  const Table t = sample();
  const Table back = parse_csv(to_csv(t));
  EXPECT_EQ(back.metadata, t.metadata);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_NO_THROW(validate(back, schemas::sweep()));
  EXPECT_EQ(data_section(back), data_section(t));
  EXPECT_EQ(to_csv(t).rfind("# ", 0), 0u);
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_THROW(parse_csv(std::string("# only metadata\n")), ValidationError);
  EXPECT_THROW(parse_csv(std::string("a,b\n1\n")), ValidationError);
  EXPECT_THROW(parse_csv(std::string("a,b\n\"1,2\n")), ValidationError);
}

TEST(Schema, ValidateNamesTheCell) {
  Table t = sample();
  t.rows[0][1] = "two";
  try {
    validate(t, schemas::sweep());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("column 'r'"), std::string::npos) << e.what();
  }
  t = sample();
  t.rows[0][6] = "";  // valid is not nullable
  EXPECT_THROW(validate(t, schemas::sweep()), ValidationError);
  t = sample();
  t.header[0] = "N";
  EXPECT_THROW(validate(t, schemas::sweep()), ValidationError);
  t = sample();
  t.rows[0][8] = "-31";
  EXPECT_THROW(validate(t, schemas::sweep()), ValidationError);
}

TEST(Json, RoundTrip) {
  const Table t = sample();
  const auto j = to_json(t, schemas::sweep());
  EXPECT_EQ(j["schema"], "sweep");
  EXPECT_TRUE(j["rows"][1]["bits"].is_null());
  EXPECT_EQ(j["rows"][0]["n"], 5);
  EXPECT_EQ(j["rows"][0]["exact_count"], "31");
  EXPECT_EQ(j["rows"][0]["valid"], true);
  const Table back = from_json(nlohmann::ordered_json::parse(j.dump()), schemas::sweep());
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.metadata, t.metadata);
  EXPECT_THROW(from_json(j, schemas::rate()), ValidationError);
}

TEST(Schema, DenseGridColumns) {
  const Schema s = schemas::dense_grid(3);
  EXPECT_EQ(s.header(), (std::vector<std::string>{"row", "c1", "c2", "c3"}));
}

}  // namespace
}  // namespace permball
