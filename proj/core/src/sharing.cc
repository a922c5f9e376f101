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

#include "faassim/sharing.h"

#include <algorithm>
#include <set>
#include <tuple>

namespace faassim {

std::string_view ResidentStateName(ResidentState state) {
  switch (state) {
    case ResidentState::kActive:
      return "active";
    case ResidentState::kStage1:
      return "stage1";
    case ResidentState::kStage2:
      return "stage2";
    case ResidentState::kStage3:
      return "stage3";
    case ResidentState::kStage4:
      return "stage4";
    case ResidentState::kEvicted:
      return "evicted";
  }
  return "unknown";
}

namespace {

constexpr std::uint64_t kResidentOwner = 0;

WarmthClass WarmthOf(ResidentState state) {
  switch (state) {
    case ResidentState::kActive:
    case ResidentState::kStage1:
      return WarmthClass::kStage1Hot;
    case ResidentState::kStage2:
      return WarmthClass::kStage2;
    case ResidentState::kStage3:
      return WarmthClass::kStage3;
    case ResidentState::kStage4:
      return WarmthClass::kStage4;
    case ResidentState::kEvicted:
      return WarmthClass::kCold;
  }
  return WarmthClass::kCold;
}

bool IsStaged(ResidentState s) {
  return s == ResidentState::kStage1 || s == ResidentState::kStage2 || s == ResidentState::kStage3 ||
         s == ResidentState::kStage4;
}

// Lower rank = retains more.
int Rank(ResidentState s) { return static_cast<int>(s); }

}  // namespace

SharingManager::SharingManager(Engine& engine, ClusterResources& resources, SharingOptions options)
    : engine_(engine), resources_(resources), options_(options) {}

const SharingManager::Resident* SharingManager::Find(const std::string& function, int gpu) const {
  auto it = residents_.find(Key{gpu, function});
  return it == residents_.end() ? nullptr : &it->second;
}

std::vector<Megabytes> SharingManager::DeltaFor(const FunctionSpec& spec, const Resident* r) const {
  std::vector<Megabytes> delta;
  if (spec.writable_mem.nano() > 0) delta.push_back(spec.writable_mem);
  if (!options_.ctx_sharing || !(r && r->gpu_ctx)) delta.push_back(spec.context_mem);
  if (Shareable(spec)) {
    if (!(r && r->gpu_ro)) delta.push_back(spec.ro_mem);
  } else if (spec.ro_mem.nano() > 0) {
    delta.push_back(spec.ro_mem);
  }
  return delta;
}

std::optional<Megabytes> SharingManager::CpuDeltaFor(const FunctionSpec& spec, const Resident* r) const {
  if (Shareable(spec) && !(r && r->cpu_ro_cache)) return spec.ro_mem;
  return std::nullopt;
}

std::vector<Megabytes> SharingManager::AdmissionDelta(const FunctionSpec& spec, int gpu) const {
  return DeltaFor(spec, Find(spec.name, gpu));
}

std::vector<Megabytes> SharingManager::ColdFootprint(const FunctionSpec& spec) const {
  return DeltaFor(spec, nullptr);
}

bool SharingManager::CanAdmit(const FunctionSpec& spec, int gpu) const {
  const Resident* r = Find(spec.name, gpu);
  if (!resources_.gpu_memory(gpu).Fits(DeltaFor(spec, r))) return false;
  if (auto cpu = CpuDeltaFor(spec, r)) {
    const Megabytes sizes[] = {*cpu};
    return resources_.host_memory(gpu).Fits(sizes);
  }
  return true;
}

AllocationId SharingManager::MustAlloc(MemoryLedger& ledger, Megabytes size, MemoryClass cls,
                                       std::uint64_t owner) {
  AllocOutcome out = ledger.TryAlloc(size, cls, owner);
  if (!out) {
    throw SimulationError("ledger " + ledger.name() + ": admission allocation of " +
                          std::to_string(size.mb()) + " MB denied after admission check");
  }
  return out.id();
}

ShareGrant SharingManager::Admit(const FunctionSpec& spec, int gpu, std::uint64_t invocation) {
  if (!CanAdmit(spec, gpu)) {
    throw SimulationError("admit of " + spec.name + " on gpu" + std::to_string(gpu) +
                          " without enough memory");
  }
  auto [it, created] = residents_.try_emplace(Key{gpu, spec.name});
  Resident& r = it->second;
  if (created) {
    r.spec = spec;
    r.gpu = gpu;
  }
  if (r.holds.contains(invocation)) {
    throw SimulationError("invocation " + std::to_string(invocation) + " admitted twice");
  }

  MemoryLedger& gpu_mem = resources_.gpu_memory(gpu);
  ShareGrant grant;
  grant.warmth = WarmthOf(r.state);
  if (r.exit_timer) {
    engine_.Cancel(*r.exit_timer);
    r.exit_timer.reset();
  }

  SetupNeeds& needs = grant.needs;
  needs.container = !r.container;
  // A retained container re-creates its CPU context off the critical path
  // (a Stage4 hit costs no CPU context time).
  needs.cpu_context = !r.container;

  Hold hold;
  if (spec.writable_mem.nano() > 0) {
    hold.writable = MustAlloc(gpu_mem, spec.writable_mem, MemoryClass::kWritable, invocation);
  }

  if (options_.ctx_sharing) {
    if (!r.gpu_ctx) {
      r.gpu_ctx = MustAlloc(gpu_mem, spec.context_mem, MemoryClass::kContext, kResidentOwner);
      r.ctx_ready = std::make_shared<ReadinessToken>(false);
      needs.gpu_context = true;
      grant.signal_context = r.ctx_ready;
    } else {
      grant.shared_ctx = true;
      if (!r.ctx_ready->ready()) {
        needs.await_context = true;
        grant.await_context = r.ctx_ready;
      }
    }
  } else {
    hold.private_ctx = MustAlloc(gpu_mem, spec.context_mem, MemoryClass::kContext, invocation);
    needs.gpu_context = true;
  }

  needs.host_bytes = spec.input_bytes_host;
  needs.pcie_bytes = spec.input_bytes_pcie;
  if (Shareable(spec)) {
    if (!r.cpu_ro_cache) {
      r.cpu_ro_cache =
          MustAlloc(resources_.host_memory(gpu), spec.ro_mem, MemoryClass::kReadOnly, kResidentOwner);
      needs.host_bytes += spec.ro_bytes_host;
    }
    if (!r.gpu_ro) {
      r.gpu_ro = MustAlloc(gpu_mem, spec.ro_mem, MemoryClass::kReadOnly, kResidentOwner);
      r.ro_ready = std::make_shared<ReadinessToken>(false);
      needs.pcie_bytes += spec.ro_bytes_pcie;
      grant.loads_read_only = true;
      grant.signal_read_only = r.ro_ready;
      ++r.ro_loads;
      // Nothing crosses PCIe, so the data is usable as soon as it is mapped.
      if (needs.pcie_bytes.is_zero()) {
        r.ro_ready->Signal();
        grant.signal_read_only.reset();
      }
    } else {
      grant.shared_ro = true;
      if (!r.ro_ready->ready()) {
        needs.await_read_only = true;
        grant.await_read_only = r.ro_ready;
      }
    }
  } else {
    if (spec.ro_mem.nano() > 0) {
      hold.private_ro = MustAlloc(gpu_mem, spec.ro_mem, MemoryClass::kReadOnly, invocation);
    }
    needs.host_bytes += spec.ro_bytes_host;
    needs.pcie_bytes += spec.ro_bytes_pcie;
    if (spec.ro_bytes_pcie.nano() > 0) {
      grant.loads_read_only = true;
      ++r.ro_loads;
    }
  }

  r.container = true;
  r.cpu_ctx = true;
  r.state = ResidentState::kActive;
  r.holds.emplace(invocation, hold);
  return grant;
}

void SharingManager::Release(const std::string& function, int gpu, std::uint64_t invocation) {
  auto it = residents_.find(Key{gpu, function});
  if (it == residents_.end() || it->second.state != ResidentState::kActive) {
    throw SimulationError("release of " + function + " on gpu" + std::to_string(gpu) +
                          " which is not active");
  }
  Resident& r = it->second;
  auto h = r.holds.find(invocation);
  if (h == r.holds.end()) {
    throw SimulationError("release by invocation " + std::to_string(invocation) + " that holds no share of " +
                          function);
  }
  MemoryLedger& gpu_mem = resources_.gpu_memory(gpu);
  for (const auto& id : {h->second.writable, h->second.private_ro, h->second.private_ctx}) {
    if (id) gpu_mem.Free(*id);
  }
  r.holds.erase(h);
  if (r.holds.empty()) EnterExit(r);
}

void SharingManager::EnterExit(Resident& r) {
  r.last_release = engine_.Now();
  if (options_.multi_stage_exit) {
    r.state = ResidentState::kStage1;
    ArmTimer(r, options_.stage_intervals[0]);
  } else if (options_.keep_alive.count() > 0) {
    r.state = ResidentState::kStage1;
    ArmTimer(r, options_.keep_alive);
  } else {
    EvictAll(r);
  }
}

void SharingManager::ArmTimer(Resident& r, Duration after) {
  const Key key{r.gpu, r.spec.name};
  r.exit_timer = engine_.ScheduleAfter(after, EventKind::kExitTimer, [this, key] { OnExitTimer(key); });
}

void SharingManager::OnExitTimer(const Key& key) {
  Resident& r = residents_.at(key);
  r.exit_timer.reset();
  if (Decay(r) && on_gpu_freed_) on_gpu_freed_(r.gpu);
}

bool SharingManager::Decay(Resident& r) {
  MemoryLedger& gpu_mem = resources_.gpu_memory(r.gpu);
  if (!options_.multi_stage_exit) {
    const bool freed = r.gpu_ro || r.gpu_ctx;
    EvictAll(r);
    return freed;
  }
  switch (r.state) {
    case ResidentState::kStage1: {
      const bool freed = r.gpu_ro.has_value();
      if (r.gpu_ro) {
        gpu_mem.Free(*r.gpu_ro);
        r.gpu_ro.reset();
        r.ro_ready.reset();
      }
      if (Shareable(r.spec) && !r.cpu_ro_cache) {
        r.cpu_ro_cache =
            MustAlloc(resources_.host_memory(r.gpu), r.spec.ro_mem, MemoryClass::kReadOnly, kResidentOwner);
      }
      r.state = ResidentState::kStage2;
      ArmTimer(r, options_.stage_intervals[1]);
      return freed;
    }
    case ResidentState::kStage2: {
      const bool freed = r.gpu_ctx.has_value();
      if (r.gpu_ctx) {
        gpu_mem.Free(*r.gpu_ctx);
        r.gpu_ctx.reset();
        r.ctx_ready.reset();
      }
      r.state = ResidentState::kStage3;
      ArmTimer(r, options_.stage_intervals[2]);
      return freed;
    }
    case ResidentState::kStage3:
      if (r.cpu_ro_cache) {
        resources_.host_memory(r.gpu).Free(*r.cpu_ro_cache);
        r.cpu_ro_cache.reset();
      }
      r.cpu_ctx = false;
      r.state = ResidentState::kStage4;
      ArmTimer(r, options_.stage_intervals[3]);
      return false;
    case ResidentState::kStage4:
      r.container = false;
      r.state = ResidentState::kEvicted;
      return false;
    case ResidentState::kActive:
    case ResidentState::kEvicted:
      break;
  }
  throw SimulationError("exit transition from state " + std::string(ResidentStateName(r.state)));
}

void SharingManager::EvictAll(Resident& r) {
  if (r.exit_timer) {
    engine_.Cancel(*r.exit_timer);
    r.exit_timer.reset();
  }
  MemoryLedger& gpu_mem = resources_.gpu_memory(r.gpu);
  if (r.gpu_ro) gpu_mem.Free(*r.gpu_ro);
  if (r.gpu_ctx) gpu_mem.Free(*r.gpu_ctx);
  if (r.cpu_ro_cache) resources_.host_memory(r.gpu).Free(*r.cpu_ro_cache);
  r.gpu_ro.reset();
  r.gpu_ctx.reset();
  r.cpu_ro_cache.reset();
  r.ro_ready.reset();
  r.ctx_ready.reset();
  r.cpu_ctx = false;
  r.container = false;
  r.state = ResidentState::kEvicted;
}

bool SharingManager::DemoteUntilFits(const FunctionSpec& spec, int gpu) {
  while (!CanAdmit(spec, gpu)) {
    Resident* victim = nullptr;
    for (auto& [key, r] : residents_) {
      if (key.first != gpu || key.second == spec.name) continue;
      if (!IsStaged(r.state) || !(r.gpu_ro || r.gpu_ctx)) continue;
      if (!victim || std::make_tuple(-Rank(r.state), r.last_release, key.second) <
                         std::make_tuple(-Rank(victim->state), victim->last_release, victim->spec.name)) {
        victim = &r;
      }
    }
    if (!victim) return false;
    if (victim->exit_timer) {
      engine_.Cancel(*victim->exit_timer);
      victim->exit_timer.reset();
    }
    Decay(*victim);
    ++demotions_;
  }
  return true;
}

ResidentMemory SharingManager::ResidentMemoryOn(int gpu) const {
  const MemoryLedger& ledger = resources_.gpu_memory(gpu);
  ResidentMemory m;
  auto add = [&](Megabytes& slot, const std::optional<AllocationId>& id) {
    if (id) slot += ledger.Get(*id).requested;
  };
  for (const auto& [key, r] : residents_) {
    if (key.first != gpu) continue;
    add(m.context, r.gpu_ctx);
    add(m.read_only, r.gpu_ro);
    for (const auto& [inv, h] : r.holds) {
      add(m.context, h.private_ctx);
      add(m.read_only, h.private_ro);
      add(m.writable, h.writable);
    }
  }
  return m;
}

std::optional<ResidentState> SharingManager::StateOf(const std::string& function, int gpu) const {
  const Resident* r = Find(function, gpu);
  if (!r) return std::nullopt;
  return r->state;
}

int SharingManager::ActiveCount(const std::string& function, int gpu) const {
  const Resident* r = Find(function, gpu);
  return r ? static_cast<int>(r->holds.size()) : 0;
}

std::uint64_t SharingManager::ReadOnlyLoads(const std::string& function, int gpu) const {
  const Resident* r = Find(function, gpu);
  return r ? r->ro_loads : 0;
}

void SharingManager::CheckConsistency() const {
  std::map<int, std::set<AllocationId>> gpu_ids;
  std::map<int, std::set<AllocationId>> cpu_ids;
  for (const auto& [key, r] : residents_) {
    const std::string where = r.spec.name + "@gpu" + std::to_string(r.gpu) + " (" +
                              std::string(ResidentStateName(r.state)) + ")";
    auto fail = [&](const std::string& what) { throw SimulationError("resident " + where + ": " + what); };
    const ResidentState s = r.state;
    const bool active = s == ResidentState::kActive;
    const bool shareable = Shareable(r.spec);
    const bool multi = options_.multi_stage_exit;

    // Without multi-stage exit the single keep-alive stage retains everything.
    const bool want_gpu_ro = shareable && (active || s == ResidentState::kStage1);
    const bool want_ctx = options_.ctx_sharing &&
                          (active || s == ResidentState::kStage1 || (multi && s == ResidentState::kStage2));
    const bool want_cache =
        shareable && (active || s == ResidentState::kStage1 || s == ResidentState::kStage2 ||
                      s == ResidentState::kStage3);
    const bool want_cpu_ctx = active || s == ResidentState::kStage1 || s == ResidentState::kStage2 ||
                              s == ResidentState::kStage3;
    const bool want_container = s != ResidentState::kEvicted;

    if (r.gpu_ro.has_value() != want_gpu_ro) fail("gpu read-only allocation mismatch");
    if (r.gpu_ctx.has_value() != want_ctx) fail("gpu context allocation mismatch");
    if (r.cpu_ro_cache.has_value() != want_cache) fail("cpu read-only cache mismatch");
    if (r.cpu_ctx != want_cpu_ctx) fail("cpu context mismatch");
    if (r.container != want_container) fail("container mismatch");
    if (active != !r.holds.empty()) fail("active count does not match holders");
    if (IsStaged(s)) {
      if (!r.exit_timer || !engine_.IsPending(*r.exit_timer)) fail("staged without a pending exit timer");
    } else if (r.exit_timer) {
      fail("exit timer pending outside the exit stages");
    }

    const MemoryLedger& gpu_mem = resources_.gpu_memory(r.gpu);
    auto track = [&](const std::optional<AllocationId>& id, const MemoryLedger& ledger,
                     std::set<AllocationId>& seen) {
      if (!id) return;
      if (!ledger.Contains(*id)) fail("holds a freed allocation");
      if (!seen.insert(*id).second) fail("allocation held twice");
    };
    track(r.gpu_ro, gpu_mem, gpu_ids[r.gpu]);
    track(r.gpu_ctx, gpu_mem, gpu_ids[r.gpu]);
    track(r.cpu_ro_cache, resources_.host_memory(r.gpu), cpu_ids[resources_.node_of(r.gpu)]);
    for (const auto& [inv, h] : r.holds) {
      if ((r.spec.writable_mem.nano() > 0) != h.writable.has_value()) fail("writable allocation mismatch");
      track(h.writable, gpu_mem, gpu_ids[r.gpu]);
      track(h.private_ro, gpu_mem, gpu_ids[r.gpu]);
      track(h.private_ctx, gpu_mem, gpu_ids[r.gpu]);
    }
  }
  for (int g = 0; g < resources_.gpu_count(); ++g) {
    if (resources_.gpu_memory(g).allocation_count() != gpu_ids[g].size()) {
      throw SimulationError("gpu" + std::to_string(g) + " ledger holds allocations owned by no resident");
    }
  }
}

}  // namespace faassim
