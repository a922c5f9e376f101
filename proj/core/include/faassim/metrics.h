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

#ifndef FAASSIM_METRICS_H_
#define FAASSIM_METRICS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "faassim/function_spec.h"
#include "faassim/simulator.h"

namespace faassim {

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest sample (the
// smallest sample for p = 0). Throws std::invalid_argument on an empty
// sample set or p outside [0, 100].
double Percentile(std::vector<double> samples, double p);

// Completions an ideal GPU could deliver in `period_ms` if only compute
// time counted. Throws std::invalid_argument when comp_ms <= 0.
double TheoreticalThroughput(double period_ms, double comp_ms);

struct LatencyStats {
  std::uint64_t count = 0;
  double mean_ms = 0;
  double p50_ms = 0;
  double p99_ms = 0;
  double max_ms = 0;
};

// Latency stats over completed records; nullopt when none completed.
std::optional<LatencyStats> ComputeLatencyStats(const std::vector<const InvocationRecord*>& records);

struct FunctionSummary {
  std::uint64_t arrivals = 0;
  std::uint64_t completed = 0;
  std::uint64_t failed = 0;
  std::optional<LatencyStats> latency;
};

struct ChannelSummary {
  std::string name;
  double delivered_mb = 0;
  double utilization = 0;  // busy time / end time
  std::uint64_t transfers = 0;
  std::size_t peak_active = 0;
};

struct RunSummary {
  std::string policy;
  std::uint64_t seed = 0;
  int gpus = 0;
  std::uint64_t arrivals = 0;
  std::uint64_t completed = 0;
  std::uint64_t failed = 0;
  std::uint64_t pending = 0;
  double period_s = 0;
  std::uint64_t completed_in_period = 0;
  double throughput_per_s = 0;
  std::optional<LatencyStats> latency;
  std::map<std::string, FunctionSummary> functions;
  std::map<std::string, std::uint64_t> warmth;
  // Only defined when compute concurrency is capped.
  std::optional<double> theoretical_throughput;
  std::optional<double> normalized_performance;
  std::vector<double> avg_gpu_memory_mb;  // per GPU over [0, period]
  double avg_gpu_memory_total_mb = 0;     // summed over GPUs
  std::vector<double> peak_gpu_memory_mb;
  std::vector<ChannelSummary> channels;
  double host_mb = 0;
  double pcie_mb = 0;
  std::uint64_t demotions = 0;
  std::uint64_t events = 0;
  double end_time_s = 0;
};

// Mean of a GPU's charged memory over [from, to], integrating the
// piecewise-constant sample series. MB.
double TimeAveragedMemory(const std::vector<MemorySample>& samples, int gpu, SimTime from, SimTime to);

RunSummary Summarize(const SimulationResult& result, const FunctionTable& functions);

nlohmann::ordered_json ToJson(const LatencyStats& stats);
nlohmann::ordered_json ToJson(const RunSummary& summary);

// Fixed-point values rendered exactly: microseconds as ms with three
// decimals, fixed-point MB with nine.
std::string FormatMillis(Duration d);
std::string FormatMillis(SimTime t);
std::string FormatMb(Megabytes m);

// Column order: id, function, gpu, outcome, warmth, arrival_ms, start_ms,
// completion_ms, queued_ms, latency_ms, host_mb, pcie_mb, then
// <stage>_begin_ms and <stage>_end_ms for every stage kind, then failure.
void WriteInvocationsCsv(std::ostream& out, const std::vector<InvocationRecord>& records);
// Columns: time_ms, gpu, context_mb, read_only_mb, writable_mb, instance_mb, total_mb.
void WriteMemoryCsv(std::ostream& out, const std::vector<MemorySample>& samples);
// Columns: time_ms, kind, seq.
void WriteEventLogCsv(std::ostream& out, const std::vector<DispatchedEvent>& log);

}  // namespace faassim

#endif  // FAASSIM_METRICS_H_
