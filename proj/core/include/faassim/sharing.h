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

#ifndef FAASSIM_SHARING_H_
#define FAASSIM_SHARING_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "faassim/cluster.h"
#include "faassim/engine.h"
#include "faassim/function_spec.h"
#include "faassim/memory_ledger.h"
#include "faassim/readiness.h"
#include "faassim/stage_plan.h"

namespace faassim {

enum class ResidentState : std::uint8_t { kActive, kStage1, kStage2, kStage3, kStage4, kEvicted };

std::string_view ResidentStateName(ResidentState state);

struct SharingOptions {
  bool ro_sharing = true;
  bool ctx_sharing = true;
  bool multi_stage_exit = true;
  std::array<Duration, 4> stage_intervals = {Seconds(30), Seconds(30), Seconds(30), Seconds(30)};
  // Single-stage keep-alive used when multi_stage_exit is off. Zero evicts on
  // the last release.
  Duration keep_alive{};
};

struct ShareGrant {
  WarmthClass warmth = WarmthClass::kCold;
  bool shared_ro = false;
  bool shared_ctx = false;
  bool loads_read_only = false;  // this invocation moves the read-only bytes
  SetupNeeds needs;
  std::shared_ptr<ReadinessToken> await_context;
  std::shared_ptr<ReadinessToken> await_read_only;
  std::shared_ptr<ReadinessToken> signal_context;
  std::shared_ptr<ReadinessToken> signal_read_only;
};

struct ResidentMemory {
  Megabytes context;
  Megabytes read_only;
  Megabytes writable;
  Megabytes total() const { return context + read_only + writable; }
};

// Per-(function, GPU) resident state for the sharing-based memory manager:
// reference-counted read-only data and context, and the timed four-stage
// exit that releases GPU read-only data, then the GPU context, then the CPU
// cache and CPU context, then the container.
//
// State is keyed by function name and GPU only; nothing is ever shared across
// functions. Writable memory is always per invocation.
class SharingManager {
 public:
  SharingManager(Engine& engine, ClusterResources& resources, SharingOptions options);
  SharingManager(const SharingManager&) = delete;
  SharingManager& operator=(const SharingManager&) = delete;

  const SharingOptions& options() const { return options_; }

  // Called whenever an exit transition or demotion frees GPU memory.
  void SetGpuFreedListener(std::function<void(int gpu)> listener) { on_gpu_freed_ = std::move(listener); }

  // GPU allocations (requested sizes) that admitting an invocation right now
  // would add. Admit must only be called when these fit.
  std::vector<Megabytes> AdmissionDelta(const FunctionSpec& spec, int gpu) const;
  bool CanAdmit(const FunctionSpec& spec, int gpu) const;
  // Memory needed by an admission with nothing resident.
  std::vector<Megabytes> ColdFootprint(const FunctionSpec& spec) const;

  // Throws SimulationError when the delta does not fit.
  ShareGrant Admit(const FunctionSpec& spec, int gpu, std::uint64_t invocation);
  // Throws SimulationError when the resident is not active or the invocation
  // is not one of its holders.
  void Release(const std::string& function, int gpu, std::uint64_t invocation);

  // Forces staged residents of other functions on `gpu` down the exit stages,
  // most-decayed and least-recently released first, until `spec` can be
  // admitted. Returns whether it now fits.
  bool DemoteUntilFits(const FunctionSpec& spec, int gpu);

  ResidentMemory ResidentMemoryOn(int gpu) const;
  std::optional<ResidentState> StateOf(const std::string& function, int gpu) const;
  int ActiveCount(const std::string& function, int gpu) const;
  std::uint64_t ReadOnlyLoads(const std::string& function, int gpu) const;
  std::uint64_t Demotions() const { return demotions_; }

  // Sweeps every resident and throws SimulationError if its held allocations
  // differ from the set its state requires, or if any GPU allocation is not
  // accounted to a resident or an active invocation.
  void CheckConsistency() const;

 private:
  using Key = std::pair<int, std::string>;

  struct Hold {
    std::optional<AllocationId> writable;
    std::optional<AllocationId> private_ro;
    std::optional<AllocationId> private_ctx;
  };

  struct Resident {
    FunctionSpec spec;
    int gpu = 0;
    ResidentState state = ResidentState::kEvicted;
    std::optional<AllocationId> gpu_ro;
    std::optional<AllocationId> gpu_ctx;
    std::optional<AllocationId> cpu_ro_cache;
    bool cpu_ctx = false;
    bool container = false;
    std::optional<EventHandle> exit_timer;
    std::shared_ptr<ReadinessToken> ctx_ready;
    std::shared_ptr<ReadinessToken> ro_ready;
    SimTime last_release = kSimStart;
    std::map<std::uint64_t, Hold> holds;
    std::uint64_t ro_loads = 0;
  };

  bool Shareable(const FunctionSpec& spec) const {
    return options_.ro_sharing && spec.ro_mem.nano() > 0;
  }
  const Resident* Find(const std::string& function, int gpu) const;
  std::vector<Megabytes> DeltaFor(const FunctionSpec& spec, const Resident* r) const;
  std::optional<Megabytes> CpuDeltaFor(const FunctionSpec& spec, const Resident* r) const;
  AllocationId MustAlloc(MemoryLedger& ledger, Megabytes size, MemoryClass cls, std::uint64_t owner);

  void EnterExit(Resident& r);
  void ArmTimer(Resident& r, Duration after);
  void OnExitTimer(const Key& key);
  // Moves a staged resident one step down; returns whether GPU memory was freed.
  bool Decay(Resident& r);
  void EvictAll(Resident& r);

  Engine& engine_;
  ClusterResources& resources_;
  SharingOptions options_;
  std::map<Key, Resident> residents_;
  std::function<void(int)> on_gpu_freed_;
  std::uint64_t demotions_ = 0;
};

}  // namespace faassim

#endif  // FAASSIM_SHARING_H_
