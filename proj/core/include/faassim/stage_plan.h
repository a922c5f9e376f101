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

#ifndef FAASSIM_STAGE_PLAN_H_
#define FAASSIM_STAGE_PLAN_H_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "faassim/function_spec.h"
#include "faassim/units.h"

namespace faassim {

// Ordered by the amount of retained state: Cold < Stage4 < ... < Stage1Hot.
enum class WarmthClass : std::uint8_t { kCold, kStage4, kStage3, kStage2, kStage1Hot };

enum class PlanMode : std::uint8_t { kSerial, kParallel };

enum class StageKind : std::uint8_t {
  kContainer,
  kCpuContext,
  kCpuLoad,
  kGpuContext,
  kGpuLoad,
  kAwaitContext,   // another invocation is creating the shared context
  kAwaitReadOnly,  // another invocation is loading the shared read-only data
  kCompute,
  kReturn,
};
inline constexpr std::size_t kStageKindCount = 9;

std::string_view WarmthName(WarmthClass warmth);
std::string_view PlanModeName(PlanMode mode);
std::string_view StageName(StageKind kind);

bool IsLoad(StageKind kind);

struct StageNode {
  StageKind kind;
  Duration duration{};  // fixed-time stages
  Megabytes bytes;      // load stages
  std::vector<std::size_t> predecessors;
};

// Stage DAG of one invocation. Nodes are stored in topological order: every
// predecessor index is smaller than the node's own index.
struct StagePlan {
  std::vector<StageNode> nodes;

  bool Contains(StageKind kind) const;
  const StageNode* Find(StageKind kind) const;
  Megabytes BytesFor(StageKind load) const;
  // Throws SimulationError when the DAG breaks the topological-order or
  // compute-readiness rules.
  void Validate() const;
};

// Which setup work an invocation must perform, given what is already held.
struct SetupNeeds {
  bool container = false;
  bool cpu_context = false;
  bool gpu_context = false;
  bool await_context = false;
  bool await_read_only = false;
  Megabytes host_bytes;
  Megabytes pcie_bytes;
};

SetupNeeds NeedsForWarmth(const FunctionSpec& spec, WarmthClass warmth);

StagePlan BuildPlan(const FunctionSpec& spec, const SetupNeeds& needs, PlanMode mode);

inline StagePlan PlanInvocation(const FunctionSpec& spec, WarmthClass warmth, PlanMode mode) {
  return BuildPlan(spec, NeedsForWarmth(spec, warmth), mode);
}

// Longest path through the plan with every stage at its uncontended time.
Duration SoloLatency(const StagePlan& plan, Bandwidth host, Bandwidth pcie);

}  // namespace faassim

#endif  // FAASSIM_STAGE_PLAN_H_
