// Copyright 2026 The afkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "afkit/csv.hpp"
#include "afkit/error.hpp"
#include "support.hpp"

namespace afkit::csv {
namespace {

TEST(Parse, QuotesEscapesAndLineEnds) {
  const auto t = parse("a,b,c\r\n1,\"x,y\",\"say \"\"hi\"\"\"\n\n2,,\"multi\nline\"\n");
  EXPECT_EQ(t.header, (Row{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0], (Row{"1", "x,y", "say \"hi\""}));
  EXPECT_EQ(t.rows[1], (Row{"2", "", "multi\nline"}));
  EXPECT_EQ(t.lines[0], 2u);
  EXPECT_EQ(t.lines[1], 4u);
  EXPECT_EQ(t.column("c"), 2u);
  EXPECT_FALSE(t.column("d"));
}

TEST(Parse, NoTrailingNewline) {
  const auto t = parse("x\n1");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0], "1");
}

TEST(Parse, SchemaErrorsCarryLine) {
  struct Case {
    const char* text;
    std::size_t line;
  };
  for (const Case& c : {Case{"a,b\n1,2\n3\n", 3}, Case{"a,b\n1,2,3\n", 2}, Case{"a\n\"open\n", 2},
                        Case{"a\n\"x\"y\n", 2}, Case{"", 1}}) {
    try {
      parse(c.text, "f.csv");
      ADD_FAILURE() << c.text;
    } catch (const SchemaError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text;
      EXPECT_EQ(e.source(), "f.csv");
      EXPECT_EQ(e.code(), ErrorCode::kSchema);
    }
  }
}

TEST(Format, RoundTripsRandomFields) {
  std::mt19937_64 rng(1);
  const std::string alphabet = "ab,\"\n\r x1";
  for (int t = 0; t < 50; ++t) {
    Table tab;
    const int cols = 1 + static_cast<int>(rng() % 4);
    for (int c = 0; c < cols; ++c) tab.header.push_back("h" + std::to_string(c));
    for (int r = 0; r < 5; ++r) {
      Row row;
      for (int c = 0; c < cols; ++c) {
        std::string f;
        const int len = 1 + static_cast<int>(rng() % 6);
        for (int k = 0; k < len; ++k) f += alphabet[rng() % alphabet.size()];
        row.push_back(f);
      }
      tab.rows.push_back(row);
    }
    const auto back = parse(format(tab));
    EXPECT_EQ(back.header, tab.header);
    EXPECT_EQ(back.rows, tab.rows);
  }
  EXPECT_EQ(escape("plain"), "plain");
  EXPECT_EQ(escape("a,b"), "\"a,b\"");
  EXPECT_EQ(escape("q\""), "\"q\"\"\"");
}

TEST(Numbers, RenderingAndInverse) {
  EXPECT_EQ(number(0.6899999, 3), "0.690");
  EXPECT_EQ(number(-0.0001, 3), "0.000");
  EXPECT_EQ(number(std::numeric_limits<double>::infinity(), 2), "inf");
  EXPECT_EQ(number(-std::numeric_limits<double>::infinity(), 2), "-inf");
  EXPECT_EQ(number(std::nan(""), 2), "n/a");
  EXPECT_EQ(number(0.1, -1), "0.1");
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = d(rng);
    EXPECT_EQ(parse_number(number(v, -1)), v);
  }
  EXPECT_TRUE(std::isinf(parse_number("inf")));
  EXPECT_TRUE(std::isnan(parse_number("n/a")));
  EXPECT_THROW(parse_number("abc"), Error);
  EXPECT_THROW(parse_number("1.5x"), Error);
  EXPECT_THROW(parse_number(""), Error);
}

TEST(Files, ReadWriteAndErrors) {
  test::TempDir dir;
  write_file(dir / "a.csv", "x,y\n1,2\n");
  EXPECT_EQ(read(dir / "a.csv").rows[0], (Row{"1", "2"}));
  try {
    read(dir / "missing.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFileNotFound);
  }
  try {
    write_file(dir / "no" / "dir" / "a.csv", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnwritablePath);
  }
}

}  // namespace
}  // namespace afkit::csv
