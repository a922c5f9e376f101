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

#ifndef FAASSIM_POLICY_H_
#define FAASSIM_POLICY_H_

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faassim/cluster.h"
#include "faassim/engine.h"
#include "faassim/invocation.h"
#include "faassim/sharing.h"
#include "faassim/stage_plan.h"

namespace faassim {

enum class PolicyKind : std::uint8_t { kFixedGsl, kFixedGslF, kDgsf, kSage, kSageNr };

std::string_view PolicyName(PolicyKind kind);
// Accepts the names printed by PolicyName. Throws std::invalid_argument.
PolicyKind ParsePolicyKind(std::string_view name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::kSage;
  PlanMode plan_mode = PlanMode::kParallel;
  Megabytes granularity = MemoryLedger::ExactGranularity();
  bool ro_sharing = true;
  bool ctx_sharing = true;
  bool multi_stage_exit = true;
  int pre_created_contexts = 0;
  Duration keep_alive{};
  std::array<Duration, 4> stage_intervals = {Seconds(30), Seconds(30), Seconds(30), Seconds(30)};
  std::optional<Duration> dgsf_ctx_ttl;

  static PolicyConfig Preset(PolicyKind kind);
};

// What a policy drives: the simulator starts plans and records failures.
class PolicyHost {
 public:
  virtual ~PolicyHost() = default;
  virtual Engine& engine() = 0;
  virtual ClusterResources& resources() = 0;
  virtual void Start(Invocation& inv, const StagePlan& plan, PlanBindings bindings) = 0;
  virtual void Fail(Invocation& inv, std::string reason) = 0;
};

// Per-GPU FIFO of invocations waiting for memory. Only the head is retried,
// so invocations start in arrival order.
class AdmissionQueue {
 public:
  using TryStart = std::function<bool(Invocation&)>;

  explicit AdmissionQueue(int gpus) : queues_(gpus), draining_(gpus, false), again_(gpus, false) {}

  bool empty(int gpu) const { return queues_.at(gpu).empty(); }
  std::size_t size() const;
  void Push(Invocation& inv) { queues_.at(inv.record.gpu).push_back(&inv); }
  // Re-entrant calls during a drain are folded into one more pass.
  void Drain(int gpu, const TryStart& try_start);

 private:
  std::vector<std::deque<Invocation*>> queues_;
  std::vector<bool> draining_;
  std::vector<bool> again_;
};

class Policy {
 public:
  explicit Policy(PolicyConfig config) : config_(config) {}
  virtual ~Policy() = default;
  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  const PolicyConfig& config() const { return config_; }

  virtual void Attach(PolicyHost& host);
  // Called once per (function, GPU) the workload may invoke, before any arrival.
  virtual void Register(const FunctionSpec& /*spec*/, int /*gpu*/) {}
  virtual void OnArrival(Invocation& inv) = 0;
  virtual void OnComplete(Invocation& inv) = 0;
  // Invocations waiting for admission (memory or a pooled context).
  virtual std::size_t QueuedCount() const = 0;
  virtual void CheckInvariants() const {}
  virtual SharingManager* sharing() { return nullptr; }

 protected:
  PolicyHost& host() { return *host_; }
  bool ExceedsDevice(const std::vector<Megabytes>& sizes, int gpu);

 private:
  PolicyConfig config_;
  PolicyHost* host_ = nullptr;
};

std::unique_ptr<Policy> MakePolicy(const PolicyConfig& config);

// Size-fixed instances: each invocation gets its own instance charged at the
// policy granularity, with every setup stage in series. No reuse.
class FixedGslPolicy : public Policy {
 public:
  using Policy::Policy;
  void Attach(PolicyHost& host) override;
  void OnArrival(Invocation& inv) override;
  void OnComplete(Invocation& inv) override;
  std::size_t QueuedCount() const override { return queue_ ? queue_->size() : 0; }

 private:
  bool TryStart(Invocation& inv);
  std::optional<AdmissionQueue> queue_;
};

// Pre-created context pool per (function, GPU), shared first-come
// first-served. Every invocation still loads all of its data.
class DgsfPolicy : public Policy {
 public:
  using Policy::Policy;
  void Attach(PolicyHost& host) override;
  void Register(const FunctionSpec& spec, int gpu) override;
  void OnArrival(Invocation& inv) override;
  void OnComplete(Invocation& inv) override;
  std::size_t QueuedCount() const override;
  void CheckInvariants() const override;

  int FreeSlots(const std::string& function, int gpu) const;
  std::size_t Waiters(const std::string& function, int gpu) const;
  bool PoolResident(const std::string& function, int gpu) const;

 private:
  struct Pool {
    const FunctionSpec* spec = nullptr;
    int gpu = 0;
    std::vector<bool> busy;
    std::deque<Invocation*> waiters;
    std::vector<AllocationId> contexts;
    std::shared_ptr<ReadinessToken> ready;
    std::optional<EventHandle> destroy_timer;
  };
  using Key = std::pair<int, std::string>;

  Pool& PoolFor(const Invocation& inv);
  void AssignSlot(Pool& pool, Invocation& inv, int slot);
  void QueueForMemory(Invocation& inv);
  bool TryStart(Invocation& inv);
  void ArmDestroy(Pool& pool);

  std::map<Key, Pool> pools_;
  std::optional<AdmissionQueue> queue_;
};

// Parallelized setup, read-only and context sharing, multi-stage exit; the
// mechanisms are individually switchable through PolicyConfig.
class SagePolicy : public Policy {
 public:
  using Policy::Policy;
  void Attach(PolicyHost& host) override;
  void OnArrival(Invocation& inv) override;
  void OnComplete(Invocation& inv) override;
  std::size_t QueuedCount() const override { return queue_ ? queue_->size() : 0; }
  void CheckInvariants() const override { sharing_->CheckConsistency(); }
  SharingManager* sharing() override { return sharing_.get(); }

 private:
  bool TryStart(Invocation& inv);
  std::unique_ptr<SharingManager> sharing_;
  std::optional<AdmissionQueue> queue_;
};

}  // namespace faassim

#endif  // FAASSIM_POLICY_H_
