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

#include "faassim/metrics.h"

#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "support/scenarios.h"

namespace faassim {
namespace {

std::vector<double> OneToHundred() {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

TEST(PercentileTest, NearestRank) {
  EXPECT_EQ(Percentile(OneToHundred(), 99), 99);
  EXPECT_EQ(Percentile(OneToHundred(), 100), 100);
  EXPECT_EQ(Percentile(OneToHundred(), 0), 1);
  EXPECT_EQ(Percentile({7.5}, 99), 7.5);
  EXPECT_EQ(Percentile({40, 10, 30, 20}, 50), 20);
  EXPECT_THROW(Percentile({}, 50), std::invalid_argument);
  EXPECT_THROW(Percentile({1}, 101), std::invalid_argument);
}

TEST(PercentileTest, MonotoneInP) {
  RngStream rng(8, StreamId::kTest);
  std::vector<double> v;
  for (int i = 0; i < 333; ++i) v.push_back(rng.NextDouble() * 1000);
  double prev = -1;
  for (double p = 0; p <= 100; p += 0.5) {
    const double x = Percentile(v, p);
    EXPECT_GE(x, prev);
    prev = x;
  }
}

TEST(TheoreticalThroughputTest, ClosedForm) {
  EXPECT_NEAR(TheoreticalThroughput(3'600'000, 24.3), 148148.148, 1e-3);
  EXPECT_DOUBLE_EQ(TheoreticalThroughput(24.3, 24.3), 1.0);
  EXPECT_THROW(TheoreticalThroughput(1000, 0), std::invalid_argument);
  EXPECT_THROW(TheoreticalThroughput(1000, -1), std::invalid_argument);
  EXPECT_NEAR(0.123 * TheoreticalThroughput(3'600'000, 24.3) / TheoreticalThroughput(3'600'000, 24.3), 0.123, 1e-12);
}

InvocationRecord Completed(std::uint64_t id, double arrival_ms, double completion_ms) {
  InvocationRecord r;
  r.id = id;
  r.function = "resnet50";
  r.gpu = 0;
  r.arrival = AtMillis(arrival_ms);
  r.start = r.arrival;
  r.completion = AtMillis(completion_ms);
  r.outcome = Outcome::kCompleted;
  return r;
}

TEST(SummarizeTest, ZeroCompletions) {
  SimulationResult res;
  res.gpus = 1;
  res.measure_end = AtMillis(1000);
  InvocationRecord pending;
  pending.function = "bert";
  res.records.push_back(pending);
  const RunSummary s = Summarize(res, DefaultFunctionTable());
  EXPECT_EQ(s.throughput_per_s, 0);
  EXPECT_FALSE(s.latency.has_value());
  EXPECT_EQ(s.pending, 1u);
}

TEST(SummarizeTest, ThroughputOverWindow) {
  SimulationResult res;
  res.gpus = 1;
  res.measure_end = AtMillis(2000);
  for (int i = 0; i < 12; ++i) res.records.push_back(Completed(i + 1, i * 100.0, i * 100.0 + 50 + i * 100.0));
  // Completions after the window do not count: ten land inside.
  const RunSummary s = Summarize(res, DefaultFunctionTable());
  EXPECT_EQ(s.completed, 12u);
  EXPECT_EQ(s.completed_in_period, 10u);
  EXPECT_DOUBLE_EQ(s.throughput_per_s, 5.0);
  EXPECT_FALSE(s.normalized_performance.has_value());
}

TEST(SummarizeTest, NormalizedPerformanceWithComputeSlots) {
  SimulationResult res;
  res.gpus = 1;
  res.compute_slots = 1;
  res.measure_end = AtMillis(243);
  for (int i = 0; i < 10; ++i) res.records.push_back(Completed(i + 1, 0, 24.3 * (i + 1)));
  const RunSummary s = Summarize(res, DefaultFunctionTable());
  ASSERT_TRUE(s.normalized_performance.has_value());
  EXPECT_NEAR(*s.normalized_performance, 1.0, 1e-9);
}

TEST(SummarizeTest, LatencyStats) {
  SimulationResult res;
  res.gpus = 1;
  res.measure_end = AtMillis(1000);
  for (int i = 1; i <= 100; ++i) res.records.push_back(Completed(i, 0, i));
  const RunSummary s = Summarize(res, DefaultFunctionTable());
  ASSERT_TRUE(s.latency);
  EXPECT_DOUBLE_EQ(s.latency->mean_ms, 50.5);
  EXPECT_DOUBLE_EQ(s.latency->p99_ms, 99);
  EXPECT_DOUBLE_EQ(s.latency->max_ms, 100);
}

TEST(MemoryAverageTest, PiecewiseConstantIntegral) {
  std::vector<MemorySample> samples;
  auto at = [&](double ms, double mb) {
    MemorySample m;
    m.time = AtMillis(ms);
    m.total = Megabytes::FromMb(mb);
    samples.push_back(m);
  };
  at(0, 0);
  at(100, 1000);
  at(300, 500);
  // 0 for 100 ms, 1000 for 200 ms, 500 for 100 ms.
  EXPECT_DOUBLE_EQ(TimeAveragedMemory(samples, 0, kSimStart, AtMillis(400)), 625.0);
  EXPECT_DOUBLE_EQ(TimeAveragedMemory(samples, 0, AtMillis(100), AtMillis(300)), 1000.0);
  EXPECT_DOUBLE_EQ(TimeAveragedMemory(samples, 1, kSimStart, AtMillis(400)), 0.0);
}

TEST(FormatTest, ExactRendering) {
  EXPECT_EQ(FormatMillis(Millis(310.5)), "310.500");
  EXPECT_EQ(FormatMillis(Duration(1)), "0.001");
  EXPECT_EQ(FormatMillis(AtMillis(2)), "2.000");
  EXPECT_EQ(FormatMb(Megabytes::FromMb(523.6)), "523.600000000");
  EXPECT_EQ(FormatMb(Megabytes::FromNano(1)), "0.000000001");
}

TEST(CsvTest, Headers) {
  std::ostringstream inv, mem, log;
  WriteInvocationsCsv(inv, {});
  WriteMemoryCsv(mem, {});
  WriteEventLogCsv(log, {});
  EXPECT_EQ(inv.str().rfind("id,function,gpu,outcome,warmth,arrival_ms,start_ms,completion_ms,queued_ms,"
                            "latency_ms,host_mb,pcie_mb,container_begin_ms",
                            0),
            0u);
  EXPECT_NE(inv.str().find(",failure\n"), std::string::npos);
  EXPECT_EQ(mem.str(), "time_ms,gpu,context_mb,read_only_mb,writable_mb,instance_mb,total_mb\n");
  EXPECT_EQ(log.str(), "time_ms,kind,seq\n");
}

TEST(CsvTest, OneRowPerInvocation) {
  const SimulationResult r = testing::RunArrivals(testing::OptionsFor(PolicyKind::kSage), testing::Burst("bert", 3));
  std::ostringstream inv;
  WriteInvocationsCsv(inv, r.records);
  const std::string s = inv.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 4);
}

}  // namespace
}  // namespace faassim
