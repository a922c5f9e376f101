// Copyright 2026 The faassim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "faassim/workload.h"

#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

namespace faassim {
namespace {

FunctionMix OneFunction() { return FunctionMix({{"resnet50", 1.0}}); }

TEST(PoissonTest, ReproducibleAndNearExpectedCount) {
  const PoissonSpec spec{10.0, Seconds(100), FunctionMix::Uniform(DefaultFunctionTable())};
  RngStream a(42, StreamId::kWorkload), b(42, StreamId::kWorkload);
  const auto x = GeneratePoisson(spec, a);
  const auto y = GeneratePoisson(spec, b);
  EXPECT_EQ(x, y);
  EXPECT_NEAR(static_cast<double>(x.size()), 1000.0, 100.0);
  for (std::size_t i = 1; i < x.size(); ++i) EXPECT_LE(x[i - 1].time, x[i].time);
  EXPECT_LT(x.back().time, AtMillis(100000));
}

TEST(PoissonTest, MeanInterArrival) {
  RngStream rng(3, StreamId::kWorkload);
  const PoissonSpec spec{10.0, Seconds(10000), OneFunction()};
  const auto arr = GeneratePoisson(spec, rng);
  ASSERT_GT(arr.size(), 99000u);
  const double mean_ms = ToMillis(arr.back().time - kSimStart) / static_cast<double>(arr.size());
  EXPECT_NEAR(mean_ms, 100.0, 1.0);
}

TEST(PoissonTest, RejectsNonPositiveRate) {
  RngStream rng(1, StreamId::kWorkload);
  EXPECT_THROW(GeneratePoisson(PoissonSpec{0.0, Seconds(1), OneFunction()}, rng), std::invalid_argument);
}

TEST(FunctionMixTest, WeightsAndValidation) {
  EXPECT_THROW(FunctionMix(std::vector<std::pair<std::string, double>>{}), std::invalid_argument);
  EXPECT_THROW(FunctionMix({{"a", 0.0}}), std::invalid_argument);
  const FunctionMix mix({{"resnet50", 3.0}, {"bert", 1.0}});
  EXPECT_NO_THROW(mix.Validate(DefaultFunctionTable()));
  const FunctionMix bad({{"resnet50", 1.0}, {"ghost", 1.0}});
  try {
    bad.Validate(DefaultFunctionTable());
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
  }
  RngStream rng(5, StreamId::kTest);
  int resnet = 0;
  for (int i = 0; i < 20000; ++i) resnet += mix.Sample(rng) == "resnet50";
  EXPECT_NEAR(resnet / 20000.0, 0.75, 0.02);
}

TEST(TraceTest, EmptyFileHasNoArrivals) {
  std::istringstream empty("");
  EXPECT_TRUE(ParseTrace(empty).arrivals.empty());
  std::istringstream header_only("timestamp_ms,function\n");
  EXPECT_TRUE(ParseTrace(header_only).arrivals.empty());
}

TEST(TraceTest, SortsStablyAndScales) {
  std::istringstream in("timestamp_ms,function\n300,bert\n100,vgg11\n100,bert\n");
  const ParsedTrace t = ParseTrace(in, &DefaultFunctionTable(), 0.01);
  ASSERT_EQ(t.arrivals.size(), 3u);
  EXPECT_EQ(t.arrivals[0], (ArrivalRecord{AtMillis(1), "vgg11"}));
  EXPECT_EQ(t.arrivals[1], (ArrivalRecord{AtMillis(1), "bert"}));
  EXPECT_EQ(t.arrivals[2], (ArrivalRecord{AtMillis(3), "bert"}));
  EXPECT_EQ(t.totals.at("bert"), 2u);
  EXPECT_EQ(t.totals.at("vgg11"), 1u);
}

TEST(TraceTest, ScalingPreservesPerFunctionTotals) {
  std::ostringstream csv;
  csv << "timestamp_ms,function\n";
  for (int i = 0; i < 500; ++i) csv << i * 37 << "," << (i % 3 ? "bert" : "lbm") << "\n";
  std::istringstream a(csv.str()), b(csv.str());
  EXPECT_EQ(ParseTrace(a).totals, ParseTrace(b, nullptr, 0.01).totals);
}

void ExpectTraceError(const std::string& body, std::size_t line, const std::string& fragment) {
  std::istringstream in(body);
  try {
    ParseTrace(in, &DefaultFunctionTable());
    FAIL() << body;
  } catch (const TraceParseError& e) {
    EXPECT_EQ(e.line(), line);
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(TraceTest, ErrorsCarryLineNumbers) {
  ExpectTraceError("timestamp_ms,function\n0,bert\n5,nosuch\n", 3, "nosuch");
  ExpectTraceError("timestamp_ms,function\n-1,bert\n", 2, "negative");
  ExpectTraceError("timestamp_ms,function\nabc,bert\n", 2, "abc");
  ExpectTraceError("timestamp_ms,function\n1,bert,extra\n", 2, "fields");
  ExpectTraceError("time,fn\n", 1, "header");
}

TEST(TraceTest, WriteThenParseRoundTrips) {
  const std::vector<ArrivalRecord> arr{{AtMillis(0), "bert"}, {AtMillis(12.5), "lbm"}};
  std::stringstream s;
  WriteTrace(s, arr);
  EXPECT_EQ(ParseTrace(s).arrivals, arr);
}

std::string CountRow(const std::string& fn, const std::vector<std::pair<int, int>>& counts) {
  std::vector<int> minutes(kMinutesPerDay, 0);
  for (auto [m, c] : counts) minutes[static_cast<std::size_t>(m)] = c;
  std::string row = fn;
  for (int c : minutes) row += "," + std::to_string(c);
  return row + "\n";
}

std::string CountHeader() {
  std::string h = "function";
  for (int m = 1; m <= kMinutesPerDay; ++m) h += "," + std::to_string(m);
  return h + "\n";
}

TEST(FlattenTest, SpreadsCountsWithinMinute) {
  std::istringstream in(CountHeader() + CountRow("f", {{0, 3}, {2, 1}}));
  std::ostringstream out;
  EXPECT_EQ(FlattenMafTrace(in, out), 4u);
  EXPECT_EQ(out.str(), "timestamp_ms,function\n0,f\n20000,f\n40000,f\n120000,f\n");
}

TEST(FlattenTest, AllZeroIsEmpty) {
  std::istringstream in(CountHeader() + CountRow("f", {}));
  std::ostringstream out;
  EXPECT_EQ(FlattenMafTrace(in, out), 0u);
  EXPECT_EQ(out.str(), "timestamp_ms,function\n");
}

TEST(FlattenTest, BadColumnCountNamesLine) {
  std::istringstream in(CountHeader() + CountRow("f", {}) + "g,1,2\n");
  std::ostringstream out;
  try {
    FlattenMafTrace(in, out);
    FAIL();
  } catch (const TraceParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(FlattenTest, OutputParsesAsTrace) {
  std::istringstream in(CountHeader() + CountRow("a", {{1, 7}}) + CountRow("b", {{1, 2}, {5, 4}}));
  std::stringstream out;
  FlattenMafTrace(in, out);
  const ParsedTrace t = ParseTrace(out);
  EXPECT_EQ(t.totals.at("a"), 7u);
  EXPECT_EQ(t.totals.at("b"), 6u);
}

}  // namespace
}  // namespace faassim
