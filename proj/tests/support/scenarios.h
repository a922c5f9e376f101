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

#ifndef FAASSIM_TESTS_SUPPORT_SCENARIOS_H_
#define FAASSIM_TESTS_SUPPORT_SCENARIOS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "faassim/config.h"
#include "faassim/experiment.h"
#include "faassim/policy.h"
#include "faassim/simulator.h"
#include "faassim/workload.h"

namespace faassim::testing {

SimulationOptions OptionsFor(PolicyConfig policy, int gpus = 1);
inline SimulationOptions OptionsFor(PolicyKind kind, int gpus = 1) {
  return OptionsFor(PolicyConfig::Preset(kind), gpus);
}

SimulationResult RunArrivals(SimulationOptions options, const std::vector<ArrivalRecord>& arrivals);

// `count` arrivals of one function, all at `at_ms`.
std::vector<ArrivalRecord> Burst(const std::string& function, int count, double at_ms = 0);

// Latency in ms of a lone invocation of `function`.
double SoloLatencyMs(PolicyConfig policy, const std::string& function);

// The ten-function Poisson workload used for the policy-ordering and memory
// checks: `duration_s` of arrivals at `rate_per_s`.
ExperimentConfig PoissonMixConfig(double rate_per_s, double duration_s, std::uint64_t seed);

// A function with no memory, no bytes and no setup: only `compute_ms`.
FunctionSpec WeightlessFunction(const std::string& name, double compute_ms);

}  // namespace faassim::testing

#endif  // FAASSIM_TESTS_SUPPORT_SCENARIOS_H_
