// Copyright 2026 The reidbench Authors
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

#include "reidbench/csv.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace reidbench {
namespace {

TEST(SplitCsvLineTest, PlainAndQuotedFields) {
  EXPECT_EQ(SplitCsvLine("a,b,,c"),
            (std::vector<std::string>{"a", "b", "", "c"}));
  EXPECT_EQ(SplitCsvLine("\"x,y\",\"he said \"\"hi\"\"\",z\r"),
            (std::vector<std::string>{"x,y", "he said \"hi\"", "z"}));
  EXPECT_EQ(SplitCsvLine(""), (std::vector<std::string>{""}));
}

TEST(CsvEscapeTest, RoundTripsThroughSplit) {
  for (std::string field : {"plain", "with,comma", "quote\"inside", ""}) {
    EXPECT_EQ(SplitCsvLine(CsvEscape(field) + "," + CsvEscape("tail")),
              (std::vector<std::string>{field, "tail"}));
  }
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.49), "0.49");
  EXPECT_EQ(FormatDouble(1.0), "1");
  EXPECT_EQ(FormatDouble(0.0), "0");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(*ParseDouble(FormatDouble(v)), v);
  }
}

TEST(ParseTest, StrictNumbers) {
  EXPECT_EQ(ParseInt64("42"), 42);
  EXPECT_EQ(ParseInt64("-7"), -7);
  EXPECT_FALSE(ParseInt64("4x").has_value());
  EXPECT_FALSE(ParseInt64("").has_value());
  EXPECT_FALSE(ParseInt64("1.5").has_value());
  EXPECT_FALSE(ParseInt64("99999999999999999999").has_value());
  EXPECT_DOUBLE_EQ(*ParseDouble("0.25"), 0.25);
  EXPECT_FALSE(ParseDouble("abc").has_value());
  EXPECT_FALSE(ParseDouble("1.0junk").has_value());
}

}  // namespace
}  // namespace reidbench
