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

#ifndef FAASSIM_EXPERIMENT_H_
#define FAASSIM_EXPERIMENT_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "faassim/config.h"
#include "faassim/metrics.h"
#include "faassim/peak_search.h"
#include "faassim/simulator.h"

namespace faassim {

struct RunOutput {
  std::string label;
  SimulationResult result;
  RunSummary summary;
};

// The open-loop arrival stream of a config: generated Poisson arrivals or
// the loaded trace. Empty for closed-loop workloads. Trace errors surface
// as ConfigError.
std::vector<ArrivalRecord> BuildArrivals(const ExperimentConfig& config);

SimulationOptions MakeSimulationOptions(const ExperimentConfig& config, const PolicyConfig& policy);

// Runs one policy variant over `arrivals` (or the closed loop of the config).
RunOutput RunVariant(const ExperimentConfig& config, const PolicyVariant& variant,
                     const std::vector<ArrivalRecord>& arrivals);
RunOutput RunExperiment(const ExperimentConfig& config);

// Every variant sees the same arrival stream. Without a compare list the
// five presets run in the order FixedGSL, FixedGSL-F, DGSF, SAGE, SAGE-NR.
std::vector<RunOutput> RunCompare(const ExperimentConfig& config);
std::vector<PolicyVariant> CompareVariants(const ExperimentConfig& config);

// Per-policy latency, throughput and memory, with ratios against the first run.
nlohmann::ordered_json CompareJson(const std::vector<RunOutput>& runs);
void WriteCompareCsv(std::ostream& out, const std::vector<RunOutput>& runs);

// summary.json, invocations.csv and memory.csv in `dir`.
void WriteRunArtifacts(const std::filesystem::path& dir, const RunOutput& run, bool event_log = false);
// One subdirectory per run plus compare.json and compare.csv.
void WriteCompareArtifacts(const std::filesystem::path& dir, const std::vector<RunOutput>& runs);

// throughput, mean and p99 on one line.
std::string Digest(const RunOutput& run);

PeakResult RunPeak(const ExperimentConfig& config, const PolicyVariant& variant);
void WritePeakTrajectoryCsv(std::ostream& out, const PeakResult& peak);

struct LatencyCheck {
  std::string label;
  double expected_ms = 0;
  double simulated_ms = 0;
  std::uint64_t samples = 0;
  bool ok = false;
};

inline constexpr double kWarmthLatencyToleranceMs = 0.1;

// Runs `arrivals` under the config's policy and a serial baseline (FixedGSL
// on the first arrival alone), and checks the latency of each warmth class.
std::vector<LatencyCheck> ValidateWarmthLatencies(const ExperimentConfig& config, const std::vector<ArrivalRecord>& arrivals);
// The built-in resnet50 warmth-sweep scenario.
ExperimentConfig WarmthSweepConfig();
std::vector<ArrivalRecord> WarmthSweepArrivals();

}  // namespace faassim

#endif  // FAASSIM_EXPERIMENT_H_
