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

#ifndef FAASSIM_SIMULATOR_H_
#define FAASSIM_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "faassim/cluster.h"
#include "faassim/engine.h"
#include "faassim/function_spec.h"
#include "faassim/invocation.h"
#include "faassim/policy.h"
#include "faassim/rng.h"
#include "faassim/stage_plan.h"
#include "faassim/workload.h"

namespace faassim {

struct SimulationOptions {
  ClusterConfig cluster;
  PolicyConfig policy;
  FunctionTable functions = DefaultFunctionTable();
  std::uint64_t seed = 1;
  Duration sample_interval = Millis(100);
  // Sweep policy and ledger invariants after every dispatched event.
  bool check_invariants = false;
  bool event_log = false;
};

// GPU ledger usage by memory class (charged sizes) at one instant.
struct MemorySample {
  SimTime time;
  int gpu = 0;
  std::array<Megabytes, kMemoryClassCount> by_class{};
  Megabytes total;
};

struct ChannelReport {
  std::string name;
  double bandwidth_mbps = 0;
  Megabytes delivered;
  Duration busy_time{};
  std::uint64_t transfers = 0;
  std::size_t peak_active = 0;
};

struct QueueProbe {
  SimTime time;
  std::size_t queued = 0;     // waiting for admission
  std::size_t in_system = 0;  // waiting or executing
};

struct SimulationResult {
  std::string policy;
  std::uint64_t seed = 0;
  int gpus = 0;
  int compute_slots = 0;
  std::vector<InvocationRecord> records;  // by invocation id
  std::vector<MemorySample> memory;       // time order; one sample per (time, gpu)
  std::vector<ChannelReport> channels;
  std::vector<QueueProbe> queue_probes;
  std::vector<DispatchedEvent> event_log;
  SimTime end_time;
  // End of the throughput window. The open-loop duration when known,
  // otherwise the last completion.
  SimTime measure_end;
  std::uint64_t events = 0;
  std::uint64_t demotions = 0;
  bool drained = true;  // false when stopped by a time limit with work left
};

// Runs one policy over one workload. Owns the engine, cluster and policy;
// executes stage plans and drives arrivals.
class Simulator : public PolicyHost {
 public:
  explicit Simulator(SimulationOptions options);
  ~Simulator() override;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  // Workload setup; call before Run. Functions are registered with the
  // policy on every GPU as they are first referenced.
  void AddArrivals(const std::vector<ArrivalRecord>& arrivals);
  void AddClosedLoop(const ClosedLoopSpec& spec);
  // Records the admission-queue length and the number in the system at `at`.
  void ProbeQueueAt(SimTime at);
  void SetMeasureEnd(SimTime end) { measure_end_ = end; }

  // Runs to exhaustion, or up to `until` when given. Throws SimulationError
  // on model violations and on leaked allocations at teardown.
  SimulationResult Run(std::optional<SimTime> until = std::nullopt);

  Engine& engine() override { return engine_; }
  ClusterResources& resources() override { return resources_; }
  void Start(Invocation& inv, const StagePlan& plan, PlanBindings bindings) override;
  void Fail(Invocation& inv, std::string reason) override;

  Policy& policy() { return *policy_; }
  const FunctionTable& functions() const { return options_.functions; }
  std::size_t in_flight() const { return executions_.size(); }
  const Invocation& invocation(std::uint64_t id) const { return *invocations_.at(id - 1); }
  std::size_t invocation_count() const { return invocations_.size(); }

 private:
  struct Execution {
    StagePlan plan;
    PlanBindings bindings;
    std::vector<std::size_t> waiting_on;
    std::vector<std::vector<std::size_t>> successors;
  };

  const FunctionSpec& SpecFor(const std::string& name);
  void EnsureRegistered(const FunctionSpec& spec);
  void OnArrival(const std::string& function, int chain);
  void StartNode(Invocation& inv, Execution& ex, std::size_t node);
  void BeginCompute(Invocation& inv, std::size_t node);
  void CompleteNode(std::uint64_t id, std::size_t node);
  void Finish(Invocation& inv);
  void NextInChain(int chain);
  void Sample(int gpu);
  void ArmTick();
  void CheckTeardown() const;

  SimulationOptions options_;
  Engine engine_;
  ClusterResources resources_;
  std::unique_ptr<Policy> policy_;
  RngStream dispatcher_;
  RngStream workload_;
  std::vector<std::unique_ptr<Invocation>> invocations_;
  std::map<std::uint64_t, Execution> executions_;
  std::set<std::string> registered_;
  std::vector<int> compute_busy_;
  std::vector<std::deque<std::pair<std::uint64_t, std::size_t>>> compute_waiting_;
  std::optional<ClosedLoopSpec> closed_loop_;
  std::uint64_t closed_loop_issued_ = 0;
  std::optional<SimTime> measure_end_;
  std::vector<MemorySample> memory_;
  std::vector<std::size_t> last_sample_;
  std::vector<QueueProbe> probes_;
  bool ran_ = false;
};

}  // namespace faassim

#endif  // FAASSIM_SIMULATOR_H_
