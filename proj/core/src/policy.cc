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

#include "faassim/policy.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace faassim {

std::string_view PolicyName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kFixedGsl:
      return "FixedGSL";
    case PolicyKind::kFixedGslF:
      return "FixedGSL-F";
    case PolicyKind::kDgsf:
      return "DGSF";
    case PolicyKind::kSage:
      return "SAGE";
    case PolicyKind::kSageNr:
      return "SAGE-NR";
  }
  return "unknown";
}

PolicyKind ParsePolicyKind(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '-' || c == '_') continue;
    key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (key == "FIXEDGSL") return PolicyKind::kFixedGsl;
  if (key == "FIXEDGSLF") return PolicyKind::kFixedGslF;
  if (key == "DGSF") return PolicyKind::kDgsf;
  if (key == "SAGE") return PolicyKind::kSage;
  if (key == "SAGENR") return PolicyKind::kSageNr;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected FixedGSL, FixedGSL-F, DGSF, SAGE or SAGE-NR)");
}

PolicyConfig PolicyConfig::Preset(PolicyKind kind) {
  PolicyConfig c;
  c.kind = kind;
  switch (kind) {
    case PolicyKind::kFixedGsl:
    case PolicyKind::kFixedGslF:
    case PolicyKind::kDgsf:
      c.plan_mode = PlanMode::kSerial;
      c.granularity =
          kind == PolicyKind::kFixedGsl ? Megabytes::FromMb(1024) : MemoryLedger::ExactGranularity();
      c.ro_sharing = false;
      c.ctx_sharing = false;
      c.multi_stage_exit = false;
      c.pre_created_contexts = kind == PolicyKind::kDgsf ? 4 : 0;
      break;
    case PolicyKind::kSage:
    case PolicyKind::kSageNr:
      c.plan_mode = PlanMode::kParallel;
      c.granularity = MemoryLedger::ExactGranularity();
      c.ro_sharing = kind == PolicyKind::kSage;
      c.ctx_sharing = true;
      c.multi_stage_exit = true;
      break;
  }
  return c;
}

std::size_t AdmissionQueue::size() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

void AdmissionQueue::Drain(int gpu, const TryStart& try_start) {
  if (draining_.at(gpu)) {
    again_[gpu] = true;
    return;
  }
  draining_[gpu] = true;
  auto& q = queues_[gpu];
  do {
    again_[gpu] = false;
    while (!q.empty() && try_start(*q.front())) q.pop_front();
  } while (again_[gpu] && !q.empty());
  draining_[gpu] = false;
}

void Policy::Attach(PolicyHost& host) { host_ = &host; }

bool Policy::ExceedsDevice(const std::vector<Megabytes>& sizes, int gpu) {
  const MemoryLedger& ledger = host().resources().gpu_memory(gpu);
  if (!ledger.capacity()) return false;
  Megabytes need;
  for (Megabytes s : sizes) {
    if (s.nano() > 0) need += ledger.EffectiveSize(s);
  }
  return need > *ledger.capacity();
}

std::unique_ptr<Policy> MakePolicy(const PolicyConfig& config) {
  switch (config.kind) {
    case PolicyKind::kFixedGsl:
    case PolicyKind::kFixedGslF:
      return std::make_unique<FixedGslPolicy>(config);
    case PolicyKind::kDgsf:
      return std::make_unique<DgsfPolicy>(config);
    case PolicyKind::kSage:
    case PolicyKind::kSageNr:
      return std::make_unique<SagePolicy>(config);
  }
  throw std::invalid_argument("unknown policy kind");
}

// FixedGSL / FixedGSL-F

void FixedGslPolicy::Attach(PolicyHost& host) {
  Policy::Attach(host);
  queue_.emplace(host.resources().gpu_count());
}

void FixedGslPolicy::OnArrival(Invocation& inv) {
  if (ExceedsDevice({inv.spec->total_mem()}, inv.record.gpu)) {
    host().Fail(inv, "instance larger than GPU memory");
    return;
  }
  if (queue_->empty(inv.record.gpu) && TryStart(inv)) return;
  queue_->Push(inv);
}

bool FixedGslPolicy::TryStart(Invocation& inv) {
  MemoryLedger& ledger = host().resources().gpu_memory(inv.record.gpu);
  AllocOutcome out = ledger.TryAlloc(inv.spec->total_mem(), MemoryClass::kInstanceFixed, inv.record.id);
  if (!out) return false;
  inv.allocations.push_back(out.id());
  inv.record.warmth = WarmthClass::kCold;
  host().Start(inv, PlanInvocation(*inv.spec, WarmthClass::kCold, config().plan_mode), {});
  return true;
}

void FixedGslPolicy::OnComplete(Invocation& inv) {
  MemoryLedger& ledger = host().resources().gpu_memory(inv.record.gpu);
  for (AllocationId id : inv.allocations) ledger.Free(id);
  inv.allocations.clear();
  queue_->Drain(inv.record.gpu, [this](Invocation& next) { return TryStart(next); });
}

// DGSF

void DgsfPolicy::Attach(PolicyHost& host) {
  Policy::Attach(host);
  queue_.emplace(host.resources().gpu_count());
}

void DgsfPolicy::Register(const FunctionSpec& spec, int gpu) {
  auto [it, created] = pools_.try_emplace(Key{gpu, spec.name});
  if (!created) return;
  Pool& pool = it->second;
  pool.spec = &spec;
  pool.gpu = gpu;
  pool.busy.assign(static_cast<std::size_t>(std::max(1, config().pre_created_contexts)), false);
  MemoryLedger& ledger = host().resources().gpu_memory(gpu);
  for (std::size_t i = 0; i < pool.busy.size(); ++i) {
    AllocOutcome out = ledger.TryAlloc(spec.context_mem, MemoryClass::kContext, 0);
    if (!out) {
      throw SimulationError("context pool for " + spec.name + " does not fit on gpu" + std::to_string(gpu) +
                            " (short by " + std::to_string(out.shortfall().mb()) + " MB)");
    }
    pool.contexts.push_back(out.id());
  }
  pool.ready = std::make_shared<ReadinessToken>(true);
  ArmDestroy(pool);
}

DgsfPolicy::Pool& DgsfPolicy::PoolFor(const Invocation& inv) {
  auto [it, created] = pools_.try_emplace(Key{inv.record.gpu, inv.spec->name});
  if (created) {
    // Unregistered function: the pool is created on first use.
    it->second.spec = inv.spec;
    it->second.gpu = inv.record.gpu;
    it->second.busy.assign(static_cast<std::size_t>(std::max(1, config().pre_created_contexts)), false);
  }
  return it->second;
}

void DgsfPolicy::OnArrival(Invocation& inv) {
  std::vector<Megabytes> footprint(static_cast<std::size_t>(std::max(1, config().pre_created_contexts)),
                                   inv.spec->context_mem);
  footprint.push_back(inv.spec->explicit_mem());
  if (ExceedsDevice(footprint, inv.record.gpu)) {
    host().Fail(inv, "context pool plus data larger than GPU memory");
    return;
  }
  Pool& pool = PoolFor(inv);
  if (pool.destroy_timer) {
    host().engine().Cancel(*pool.destroy_timer);
    pool.destroy_timer.reset();
  }
  if (pool.waiters.empty()) {
    auto free = std::find(pool.busy.begin(), pool.busy.end(), false);
    if (free != pool.busy.end()) {
      AssignSlot(pool, inv, static_cast<int>(free - pool.busy.begin()));
      return;
    }
  }
  pool.waiters.push_back(&inv);
}

void DgsfPolicy::AssignSlot(Pool& pool, Invocation& inv, int slot) {
  pool.busy[static_cast<std::size_t>(slot)] = true;
  inv.slot = slot;
  QueueForMemory(inv);
}

void DgsfPolicy::QueueForMemory(Invocation& inv) {
  if (queue_->empty(inv.record.gpu) && TryStart(inv)) return;
  queue_->Push(inv);
}

bool DgsfPolicy::TryStart(Invocation& inv) {
  Pool& pool = PoolFor(inv);
  const FunctionSpec& spec = *inv.spec;
  MemoryLedger& ledger = host().resources().gpu_memory(inv.record.gpu);
  const bool recreate = pool.contexts.empty();
  std::vector<Megabytes> sizes = {spec.ro_mem, spec.writable_mem};
  if (recreate) sizes.insert(sizes.end(), pool.busy.size(), spec.context_mem);
  if (!ledger.Fits(sizes)) return false;

  PlanBindings bindings;
  SetupNeeds needs = NeedsForWarmth(spec, WarmthClass::kCold);
  needs.gpu_context = false;
  if (recreate) {
    for (std::size_t i = 0; i < pool.busy.size(); ++i) {
      pool.contexts.push_back(ledger.TryAlloc(spec.context_mem, MemoryClass::kContext, 0).id());
    }
    pool.ready = std::make_shared<ReadinessToken>(false);
    needs.gpu_context = true;
    bindings.signal_context = pool.ready;
  } else if (!pool.ready->ready()) {
    needs.await_context = true;
    bindings.await_context = pool.ready;
  }
  if (spec.ro_mem.nano() > 0) {
    inv.allocations.push_back(ledger.TryAlloc(spec.ro_mem, MemoryClass::kReadOnly, inv.record.id).id());
  }
  if (spec.writable_mem.nano() > 0) {
    inv.allocations.push_back(ledger.TryAlloc(spec.writable_mem, MemoryClass::kWritable, inv.record.id).id());
  }
  inv.record.warmth = WarmthClass::kCold;
  host().Start(inv, BuildPlan(spec, needs, config().plan_mode), std::move(bindings));
  return true;
}

void DgsfPolicy::OnComplete(Invocation& inv) {
  const int gpu = inv.record.gpu;
  MemoryLedger& ledger = host().resources().gpu_memory(gpu);
  for (AllocationId id : inv.allocations) ledger.Free(id);
  inv.allocations.clear();

  Pool& pool = PoolFor(inv);
  const int slot = inv.slot;
  inv.slot = -1;
  if (!pool.waiters.empty()) {
    Invocation* next = pool.waiters.front();
    pool.waiters.pop_front();
    AssignSlot(pool, *next, slot);
  } else {
    pool.busy[static_cast<std::size_t>(slot)] = false;
    ArmDestroy(pool);
  }
  queue_->Drain(gpu, [this](Invocation& next) { return TryStart(next); });
}

void DgsfPolicy::ArmDestroy(Pool& pool) {
  if (!config().dgsf_ctx_ttl || pool.contexts.empty()) return;
  if (std::find(pool.busy.begin(), pool.busy.end(), true) != pool.busy.end()) return;
  const Key key{pool.gpu, pool.spec->name};
  pool.destroy_timer =
      host().engine().ScheduleAfter(*config().dgsf_ctx_ttl, EventKind::kExitTimer, [this, key] {
        Pool& p = pools_.at(key);
        p.destroy_timer.reset();
        MemoryLedger& ledger = host().resources().gpu_memory(p.gpu);
        for (AllocationId id : p.contexts) ledger.Free(id);
        p.contexts.clear();
        p.ready.reset();
        queue_->Drain(p.gpu, [this](Invocation& next) { return TryStart(next); });
      });
}

std::size_t DgsfPolicy::QueuedCount() const {
  std::size_t n = queue_ ? queue_->size() : 0;
  for (const auto& [key, pool] : pools_) n += pool.waiters.size();
  return n;
}

int DgsfPolicy::FreeSlots(const std::string& function, int gpu) const {
  auto it = pools_.find(Key{gpu, function});
  if (it == pools_.end()) return 0;
  return static_cast<int>(std::count(it->second.busy.begin(), it->second.busy.end(), false));
}

std::size_t DgsfPolicy::Waiters(const std::string& function, int gpu) const {
  auto it = pools_.find(Key{gpu, function});
  return it == pools_.end() ? 0 : it->second.waiters.size();
}

bool DgsfPolicy::PoolResident(const std::string& function, int gpu) const {
  auto it = pools_.find(Key{gpu, function});
  return it != pools_.end() && !it->second.contexts.empty();
}

void DgsfPolicy::CheckInvariants() const {
  for (const auto& [key, pool] : pools_) {
    const bool any_free = std::find(pool.busy.begin(), pool.busy.end(), false) != pool.busy.end();
    if (any_free && !pool.waiters.empty()) {
      throw SimulationError("context pool for " + key.second + " has a free slot and waiters");
    }
    if (!pool.contexts.empty() && pool.contexts.size() != pool.busy.size()) {
      throw SimulationError("context pool for " + key.second + " holds a partial set of contexts");
    }
  }
}

// SAGE / SAGE-NR

void SagePolicy::Attach(PolicyHost& host) {
  Policy::Attach(host);
  SharingOptions options;
  options.ro_sharing = config().ro_sharing;
  options.ctx_sharing = config().ctx_sharing;
  options.multi_stage_exit = config().multi_stage_exit;
  options.stage_intervals = config().stage_intervals;
  options.keep_alive = config().keep_alive;
  sharing_ = std::make_unique<SharingManager>(host.engine(), host.resources(), options);
  queue_.emplace(host.resources().gpu_count());
  sharing_->SetGpuFreedListener([this](int gpu) {
    queue_->Drain(gpu, [this](Invocation& next) { return TryStart(next); });
  });
}

void SagePolicy::OnArrival(Invocation& inv) {
  if (ExceedsDevice(sharing_->ColdFootprint(*inv.spec), inv.record.gpu)) {
    host().Fail(inv, "function footprint larger than GPU memory");
    return;
  }
  if (queue_->empty(inv.record.gpu) && TryStart(inv)) return;
  queue_->Push(inv);
}

bool SagePolicy::TryStart(Invocation& inv) {
  const int gpu = inv.record.gpu;
  if (!sharing_->CanAdmit(*inv.spec, gpu) && !sharing_->DemoteUntilFits(*inv.spec, gpu)) return false;
  ShareGrant grant = sharing_->Admit(*inv.spec, gpu, inv.record.id);
  inv.record.warmth = grant.warmth;
  PlanBindings bindings{grant.await_context, grant.await_read_only, grant.signal_context,
                        grant.signal_read_only};
  host().Start(inv, BuildPlan(*inv.spec, grant.needs, config().plan_mode), std::move(bindings));
  return true;
}

void SagePolicy::OnComplete(Invocation& inv) {
  sharing_->Release(inv.spec->name, inv.record.gpu, inv.record.id);
  queue_->Drain(inv.record.gpu, [this](Invocation& next) { return TryStart(next); });
}

}  // namespace faassim
