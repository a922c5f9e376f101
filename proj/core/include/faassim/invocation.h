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

#ifndef FAASSIM_INVOCATION_H_
#define FAASSIM_INVOCATION_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faassim/function_spec.h"
#include "faassim/memory_ledger.h"
#include "faassim/readiness.h"
#include "faassim/stage_plan.h"
#include "faassim/units.h"

namespace faassim {

enum class Outcome : std::uint8_t { kPending, kCompleted, kFailed };

std::string_view OutcomeName(Outcome outcome);

struct StageInterval {
  SimTime begin;
  SimTime end;
};

// One request's lifecycle record.
struct InvocationRecord {
  std::uint64_t id = 0;
  std::string function;
  int gpu = -1;
  SimTime arrival;
  std::optional<SimTime> start;  // admission time
  std::optional<SimTime> completion;
  WarmthClass warmth = WarmthClass::kCold;
  std::array<std::optional<StageInterval>, kStageKindCount> stages{};
  Megabytes host_bytes;
  Megabytes pcie_bytes;
  Outcome outcome = Outcome::kPending;
  std::string failure;

  Duration queued() const { return start ? *start - arrival : Duration{}; }
  Duration latency() const { return completion ? *completion - arrival : Duration{}; }
  const std::optional<StageInterval>& stage(StageKind kind) const {
    return stages[static_cast<std::size_t>(kind)];
  }
};

// Readiness tokens a started plan waits on or signals.
struct PlanBindings {
  std::shared_ptr<ReadinessToken> await_context;
  std::shared_ptr<ReadinessToken> await_read_only;
  std::shared_ptr<ReadinessToken> signal_context;    // after the GpuContext stage
  std::shared_ptr<ReadinessToken> signal_read_only;  // after the GpuLoad stage
};

// Runtime state of an invocation while it moves through a policy.
struct Invocation {
  InvocationRecord record;
  const FunctionSpec* spec = nullptr;
  std::vector<AllocationId> allocations;  // policy-owned, freed on completion
  int slot = -1;                          // context-pool slot, when pooled
  int chain = -1;                         // closed-loop chain, if any
};

}  // namespace faassim

#endif  // FAASSIM_INVOCATION_H_
