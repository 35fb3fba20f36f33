// Copyright 2026 The CMSA-BIP Authors
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

#include "cmsa/mps.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>
#include <string>

#include "cmsa/error.hpp"
#include "support/oracle.hpp"

namespace cmsa {
namespace {

constexpr const char* kMinimal = R"(NAME          TINY
ROWS
 N  COST
 L  LIM1
COLUMNS
    MARKER                 'MARKER'                 'INTORG'
    X1        COST         1.0   LIM1         1.0
    X2        COST         2.0   LIM1         1.0
    MARKER                 'MARKER'                 'INTEND'
RHS
    RHS       LIM1         1.0
BOUNDS
 BV BND       X1
 BV BND       X2
ENDATA
)";

BipInstance round_trip(const BipInstance& inst) {
  std::ostringstream out;
  write_mps(inst, out);
  return parse_mps(out.str());
}

TEST(ParseMps, MinimalDocument) {
  const BipInstance inst = parse_mps(std::string_view(kMinimal));
  EXPECT_EQ(inst.num_vars(), 2);
  EXPECT_EQ(inst.num_rows(), 1);
  EXPECT_EQ(inst.name(), "TINY");
  EXPECT_EQ(inst.row(0).sense, RowSense::kLe);
  EXPECT_EQ(inst.row(0).rhs, 1.0);
  EXPECT_EQ(inst.objective()[1], 2.0);
}

TEST(ParseMps, ColumnWithoutMarkerOrBinaryBoundIsRejected) {
  const std::string doc = R"(NAME T
ROWS
 N  COST
 L  LIM1
COLUMNS
    X1        COST         1.0   LIM1         1.0
RHS
    RHS       LIM1         1.0
ENDATA
)";
  try {
    parse_mps(std::string_view(doc));
    FAIL() << "expected UnsupportedVariable";
  } catch (const UnsupportedVariable& e) {
    EXPECT_EQ(e.variable(), "X1");
    EXPECT_EQ(e.line(), 6);
  }
}

TEST(ParseMps, IntegerWithWideBoundsIsRejected) {
  std::string doc = kMinimal;
  doc.replace(doc.find(" BV BND       X2"), 16, " UP BND       X2  3");
  EXPECT_THROW(parse_mps(std::string_view(doc)), UnsupportedVariable);
}

TEST(ParseMps, MarkedColumnsNeedBinaryBounds) {
  std::string doc = kMinimal;
  doc.erase(doc.find("BOUNDS"), doc.find("ENDATA") - doc.find("BOUNDS"));
  EXPECT_THROW(parse_mps(std::string_view(doc)), UnsupportedVariable);
  doc.replace(doc.find("ENDATA"), 6,
              "BOUNDS\n UP BND       X1  1\n UP BND       X2  1\nENDATA");
  EXPECT_EQ(parse_mps(std::string_view(doc)).num_vars(), 2);
}

TEST(ParseMps, TypedErrors) {
  std::string missing_end = kMinimal;
  missing_end.erase(missing_end.find("ENDATA"));
  EXPECT_THROW(parse_mps(std::string_view(missing_end)), MpsFormatError);

  std::string unknown = kMinimal;
  unknown.replace(unknown.find("BOUNDS"), 6, "BOGUS");
  try {
    parse_mps(std::string_view(unknown));
    FAIL();
  } catch (const MpsFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("BOGUS"), std::string::npos);
  }

  std::string dup_row = kMinimal;
  dup_row.replace(dup_row.find(" L  LIM1"), 8, " L  LIM1\n G  LIM1");
  EXPECT_THROW(parse_mps(std::string_view(dup_row)), MpsFormatError);

  std::string dup_col = kMinimal;
  dup_col.replace(dup_col.find("    X2        COST"), 18, "    X1        COST");
  EXPECT_THROW(parse_mps(std::string_view(dup_col)), MpsFormatError);
}

TEST(ParseMps, RangesAndObjsense) {
  const std::string doc = R"(NAME R
OBJSENSE
    MAX
ROWS
 N  OBJ
 L  A
 G  B
 E  C
 E  D
COLUMNS
    MARKER  'MARKER'  'INTORG'
    X  OBJ  1  A  1
    X  B  1  C  1
    X  D  1
    Y  OBJ  2  A  1
    Y  B  1  C  1
    Y  D  1
    MARKER  'MARKER'  'INTEND'
RHS
    RHS  A  2  B  1
    RHS  C  1  D  1
RANGES
    RNG  A  1.5  B  0.5
    RNG  C  -1  D  0
BOUNDS
 UP BND  X  1
 BV BND  Y
ENDATA
)";
  const BipInstance inst = parse_mps(std::string_view(doc));
  EXPECT_TRUE(inst.objective_negated());
  EXPECT_EQ(inst.objective()[0], -1.0);
  // A: [0.5, 2], B: [1, 1.5], C: [0, 1], D: exactly 1.
  ASSERT_EQ(inst.num_rows(), 7);
  auto find_row = [&](const std::string& name) {
    for (int i = 0; i < inst.num_rows(); ++i) {
      if (inst.row_names()[i] == name) return i;
    }
    return -1;
  };
  const int a = find_row("A");
  const int a_upper = find_row("A_rng");
  const int b = find_row("B");
  const int d = find_row("D");
  ASSERT_GE(a, 0);
  ASSERT_GE(a_upper, 0);
  ASSERT_GE(b, 0);
  ASSERT_GE(d, 0);
  EXPECT_EQ(inst.row(a).sense, RowSense::kGe);
  EXPECT_EQ(inst.row(a).rhs, 0.5);
  EXPECT_EQ(inst.row(a_upper).sense, RowSense::kLe);
  EXPECT_EQ(inst.row(a_upper).rhs, 2.0);
  EXPECT_EQ(inst.row(b).sense, RowSense::kGe);
  EXPECT_EQ(inst.row(b).rhs, 1.0);
  EXPECT_EQ(inst.row(d).sense, RowSense::kEq);
  // Check the feasible set by enumeration: x+y in [1, 1.5] and in [0, 1].
  for (std::uint64_t mask = 0; mask < 4; ++mask) {
    const auto x = testing::bits(mask, 2);
    const bool expected = x[0] + x[1] == 1;
    EXPECT_EQ(evaluate(inst, x).feasible, expected) << mask;
  }
}

TEST(WriteMps, MinimalRoundTrip) {
  const BipInstance inst = parse_mps(std::string_view(kMinimal));
  std::string why;
  EXPECT_TRUE(testing::same_structure(inst, round_trip(inst), &why)) << why;
}

TEST(WriteMps, EqualityRowSurvives) {
  const BipInstance inst({"a", "b"}, {1, 1}, ObjectiveSense::kMinimize,
                         {RowSpec{"eq", {{0, 1}, {1, 1}}, RowSense::kEq, 1}});
  std::ostringstream out;
  write_mps(inst, out);
  EXPECT_NE(out.str().find(" E  eq"), std::string::npos);
  const BipInstance back = parse_mps(out.str());
  EXPECT_EQ(back.row(0).sense, RowSense::kEq);
}

TEST(WriteMps, RandomRoundTrips) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 30);
    const int m = static_cast<int>(rng() % 31);
    const BipInstance inst = testing::random_named_instance(rng, n, m);
    std::string why;
    ASSERT_TRUE(testing::same_structure(inst, round_trip(inst), &why))
        << "trial " << trial << ": " << why;
  }
}

TEST(WriteMps, FileRoundTripAndIoError) {
  const BipInstance inst = testing::knapsack3();
  const auto path = std::filesystem::temp_directory_path() / "cmsa_mps_rt.mps";
  write_mps_file(inst, path);
  std::string why;
  EXPECT_TRUE(testing::same_structure(inst, read_mps_file(path), &why)) << why;
  std::filesystem::remove(path);
  EXPECT_THROW(read_mps_file("/nonexistent/dir/x.mps"), IoError);
  EXPECT_THROW(write_mps_file(inst, "/nonexistent/dir/x.mps"), IoError);
}

// Mutations of a valid document must either parse into a valid instance or
// raise one of the typed errors.
TEST(ParseMps, FuzzedDocumentsFailWithTypedErrors) {
  std::mt19937_64 rng(99);
  std::ostringstream base_out;
  write_mps(testing::random_named_instance(rng, 8, 6), base_out);
  const std::string base = base_out.str();
  const char* headers[] = {"ROWS",   "COLUMNS", "RHS", "BOUNDS",   "RANGES",
                           "ENDATA", "NAME",    "FOO", "OBJSENSE", ""};
  int parsed = 0;
  int rejected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::string doc = base;
    switch (trial % 4) {
      case 0:
        doc.resize(rng() % doc.size());
        break;
      case 1: {
        const std::size_t at = doc.find('\n', rng() % doc.size());
        if (at != std::string::npos) {
          doc.insert(at + 1, std::string(headers[rng() % 10]) + "\n");
        }
        break;
      }
      case 2: {
        const std::size_t at = rng() % doc.size();
        doc[at] = " \nX1-.e'"[rng() % 7];
        break;
      }
      default: {
        const std::size_t from = rng() % doc.size();
        doc.erase(from, rng() % 40);
        break;
      }
    }
    try {
      const BipInstance inst = parse_mps(std::string_view(doc));
      EXPECT_GE(inst.num_vars(), 1);
      ++parsed;
    } catch (const MpsFormatError&) {
      ++rejected;
    } catch (const UsageError&) {
      ++rejected;
    }
  }
  EXPECT_GT(rejected, 0);
  EXPECT_EQ(parsed + rejected, 2000);
}

}  // namespace
}  // namespace cmsa
