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

#include "faassim/simulator.h"

#include <algorithm>
#include <limits>
#include <utility>

namespace faassim {

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kPending:
      return "pending";
    case Outcome::kCompleted:
      return "completed";
    case Outcome::kFailed:
      return "failed";
  }
  return "unknown";
}

namespace {
constexpr std::size_t kNoSample = std::numeric_limits<std::size_t>::max();
}  // namespace

Simulator::Simulator(SimulationOptions options)
    : options_(std::move(options)),
      resources_(engine_, options_.cluster, options_.policy.granularity),
      policy_(MakePolicy(options_.policy)),
      dispatcher_(options_.seed, StreamId::kDispatcher),
      workload_(options_.seed, StreamId::kWorkload),
      compute_busy_(static_cast<std::size_t>(options_.cluster.gpus), 0),
      compute_waiting_(static_cast<std::size_t>(options_.cluster.gpus)),
      last_sample_(static_cast<std::size_t>(options_.cluster.gpus), kNoSample) {
  if (options_.sample_interval <= Duration::zero()) {
    throw std::invalid_argument("sample interval must be positive");
  }
  engine_.EnableLog(options_.event_log);
  policy_->Attach(*this);
  for (int g = 0; g < resources_.gpu_count(); ++g) {
    resources_.gpu_memory(g).SetChangeListener([this, g] { Sample(g); });
    Sample(g);
  }
  if (options_.check_invariants) {
    engine_.SetObserver([this](const DispatchedEvent&) { policy_->CheckInvariants(); });
  }
}

Simulator::~Simulator() = default;

const FunctionSpec& Simulator::SpecFor(const std::string& name) {
  auto it = options_.functions.find(name);
  if (it == options_.functions.end()) throw std::invalid_argument("unknown function '" + name + "'");
  return it->second;
}

void Simulator::EnsureRegistered(const FunctionSpec& spec) {
  if (registered_.contains(spec.name)) return;
  registered_.insert(spec.name);
  for (int g = 0; g < resources_.gpu_count(); ++g) policy_->Register(spec, g);
}

void Simulator::AddArrivals(const std::vector<ArrivalRecord>& arrivals) {
  for (const auto& a : arrivals) EnsureRegistered(SpecFor(a.function));
  for (const auto& a : arrivals) {
    engine_.Schedule(a.time, EventKind::kArrival, [this, fn = a.function] { OnArrival(fn, -1); });
  }
}

void Simulator::AddClosedLoop(const ClosedLoopSpec& spec) {
  if (closed_loop_) throw std::invalid_argument("only one closed-loop workload per run");
  if (spec.concurrency < 1) throw std::invalid_argument("closed-loop concurrency must be at least 1");
  spec.mix.Validate(options_.functions);
  for (const auto& [name, w] : spec.mix.weights()) EnsureRegistered(SpecFor(name));
  closed_loop_ = spec;
  for (int c = 0; c < spec.concurrency; ++c) NextInChain(c);
}

void Simulator::ProbeQueueAt(SimTime at) {
  engine_.Schedule(at, EventKind::kMeasurementTick,
                   [this] {
                     const std::size_t queued = policy_->QueuedCount();
                     probes_.push_back({engine_.Now(), queued, queued + executions_.size()});
                   });
}

void Simulator::NextInChain(int chain) {
  if (!closed_loop_ || closed_loop_issued_ >= closed_loop_->count) return;
  ++closed_loop_issued_;
  const std::string fn = closed_loop_->mix.Sample(workload_);
  engine_.Schedule(engine_.Now(), EventKind::kArrival, [this, fn, chain] { OnArrival(fn, chain); });
}

void Simulator::OnArrival(const std::string& function, int chain) {
  auto inv = std::make_unique<Invocation>();
  inv->record.id = invocations_.size() + 1;
  inv->record.function = function;
  inv->record.gpu = static_cast<int>(dispatcher_.UniformIndex(static_cast<std::uint64_t>(resources_.gpu_count())));
  inv->record.arrival = engine_.Now();
  inv->spec = &SpecFor(function);
  inv->chain = chain;
  invocations_.push_back(std::move(inv));
  policy_->OnArrival(*invocations_.back());
}

void Simulator::Start(Invocation& inv, const StagePlan& plan, PlanBindings bindings) {
  if (inv.record.start) throw SimulationError("invocation " + std::to_string(inv.record.id) + " started twice");
  plan.Validate();
  inv.record.start = engine_.Now();

  Execution ex;
  ex.plan = plan;
  ex.bindings = std::move(bindings);
  ex.waiting_on.resize(plan.nodes.size());
  ex.successors.resize(plan.nodes.size());
  for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
    ex.waiting_on[i] = plan.nodes[i].predecessors.size();
    for (std::size_t p : plan.nodes[i].predecessors) ex.successors[p].push_back(i);
  }
  // A leader whose plan lacks the producing stage has nothing to wait for.
  if (ex.bindings.signal_context && !plan.Contains(StageKind::kGpuContext)) ex.bindings.signal_context->Signal();
  if (ex.bindings.signal_read_only && !plan.Contains(StageKind::kGpuLoad)) {
    ex.bindings.signal_read_only->Signal();
  }

  auto [it, inserted] = executions_.emplace(inv.record.id, std::move(ex));
  if (!inserted) throw SimulationError("duplicate execution");
  for (std::size_t i = 0; i < it->second.plan.nodes.size(); ++i) {
    if (it->second.waiting_on[i] == 0) StartNode(inv, it->second, i);
  }
}

void Simulator::StartNode(Invocation& inv, Execution& ex, std::size_t node) {
  const StageNode& n = ex.plan.nodes[node];
  const std::uint64_t id = inv.record.id;
  inv.record.stages[static_cast<std::size_t>(n.kind)] = StageInterval{engine_.Now(), engine_.Now()};
  auto complete = [this, id, node] { CompleteNode(id, node); };
  switch (n.kind) {
    case StageKind::kCpuLoad:
      inv.record.host_bytes += n.bytes;
      resources_.host_channel(inv.record.gpu).BeginTransfer(n.bytes, id, [complete](TransferId) { complete(); });
      break;
    case StageKind::kGpuLoad:
      inv.record.pcie_bytes += n.bytes;
      resources_.pcie_channel(inv.record.gpu).BeginTransfer(n.bytes, id, [complete](TransferId) { complete(); });
      break;
    case StageKind::kAwaitContext:
    case StageKind::kAwaitReadOnly: {
      auto& token = n.kind == StageKind::kAwaitContext ? ex.bindings.await_context : ex.bindings.await_read_only;
      if (!token) throw SimulationError("await stage without a readiness token");
      token->OnReady([this, complete] { engine_.Schedule(engine_.Now(), EventKind::kStageComplete, complete); });
      break;
    }
    case StageKind::kCompute:
      BeginCompute(inv, node);
      break;
    default:
      engine_.ScheduleAfter(n.duration, EventKind::kStageComplete, complete);
      break;
  }
}

void Simulator::BeginCompute(Invocation& inv, std::size_t node) {
  const auto gpu = static_cast<std::size_t>(inv.record.gpu);
  const int slots = options_.cluster.compute_slots;
  if (slots > 0 && compute_busy_[gpu] >= slots) {
    compute_waiting_[gpu].emplace_back(inv.record.id, node);
    return;
  }
  ++compute_busy_[gpu];
  const std::uint64_t id = inv.record.id;
  engine_.ScheduleAfter(inv.spec->compute_time, EventKind::kStageComplete, [this, id, node, gpu] {
    --compute_busy_[gpu];
    if (!compute_waiting_[gpu].empty()) {
      auto [next, next_node] = compute_waiting_[gpu].front();
      compute_waiting_[gpu].pop_front();
      BeginCompute(*invocations_.at(next - 1), next_node);
    }
    CompleteNode(id, node);
  });
}

void Simulator::CompleteNode(std::uint64_t id, std::size_t node) {
  auto it = executions_.find(id);
  if (it == executions_.end()) throw SimulationError("stage completion for a finished invocation");
  Execution& ex = it->second;
  Invocation& inv = *invocations_.at(id - 1);
  const StageKind kind = ex.plan.nodes[node].kind;
  inv.record.stages[static_cast<std::size_t>(kind)]->end = engine_.Now();

  if (kind == StageKind::kGpuContext && ex.bindings.signal_context) ex.bindings.signal_context->Signal();
  if (kind == StageKind::kGpuLoad && ex.bindings.signal_read_only) ex.bindings.signal_read_only->Signal();
  if (kind == StageKind::kReturn) {
    Finish(inv);
    return;
  }
  for (std::size_t s : ex.successors[node]) {
    if (--ex.waiting_on[s] == 0) StartNode(inv, ex, s);
  }
}

void Simulator::Finish(Invocation& inv) {
  inv.record.completion = engine_.Now();
  inv.record.outcome = Outcome::kCompleted;
  executions_.erase(inv.record.id);
  policy_->OnComplete(inv);
  NextInChain(inv.chain);
}

void Simulator::Fail(Invocation& inv, std::string reason) {
  inv.record.outcome = Outcome::kFailed;
  inv.record.failure = std::move(reason);
  NextInChain(inv.chain);
}

void Simulator::Sample(int gpu) {
  const MemoryLedger& ledger = resources_.gpu_memory(gpu);
  MemorySample s;
  s.time = engine_.Now();
  s.gpu = gpu;
  for (std::size_t c = 0; c < kMemoryClassCount; ++c) s.by_class[c] = ledger.used(static_cast<MemoryClass>(c));
  s.total = ledger.used();
  std::size_t& last = last_sample_[static_cast<std::size_t>(gpu)];
  if (last != kNoSample && memory_[last].time == s.time) {
    memory_[last] = s;
    return;
  }
  last = memory_.size();
  memory_.push_back(s);
}

void Simulator::ArmTick() {
  engine_.ScheduleAfter(options_.sample_interval, EventKind::kMeasurementTick, [this] {
    for (int g = 0; g < resources_.gpu_count(); ++g) Sample(g);
    if (engine_.PendingCount() > engine_.PendingCount(EventKind::kMeasurementTick)) ArmTick();
  });
}

void Simulator::CheckTeardown() const {
  for (const auto& inv : invocations_) {
    if (inv->record.outcome == Outcome::kPending) {
      throw SimulationError("invocation " + std::to_string(inv->record.id) + " never finished");
    }
  }
  for (int g = 0; g < resources_.gpu_count(); ++g) {
    for (const auto& [id, a] : resources_.gpu_memory(g).allocations()) {
      // Pre-created context pools are the only allocations meant to outlive a run.
      const bool persistent = a.cls == MemoryClass::kContext && a.owner == 0;
      if (!persistent) {
        throw SimulationError("leaked " + std::string(MemoryClassName(a.cls)) + " allocation of " +
                              std::to_string(a.requested.mb()) + " MB on gpu" + std::to_string(g));
      }
    }
    if (resources_.host_memory(g).allocation_count() != 0) {
      throw SimulationError("leaked host memory on node " + std::to_string(resources_.node_of(g)));
    }
  }
}

SimulationResult Simulator::Run(std::optional<SimTime> until) {
  if (ran_) throw std::logic_error("Simulator::Run called twice");
  ran_ = true;
  if (engine_.PendingCount() > 0) ArmTick();

  SimulationResult result;
  if (until) {
    engine_.RunUntil(*until);
  } else {
    engine_.Run();
  }
  policy_->CheckInvariants();
  result.drained = std::none_of(invocations_.begin(), invocations_.end(),
                                [](const auto& inv) { return inv->record.outcome == Outcome::kPending; });
  if (engine_.PendingCount() == 0) CheckTeardown();

  result.policy = std::string(PolicyName(options_.policy.kind));
  result.seed = options_.seed;
  result.gpus = resources_.gpu_count();
  result.compute_slots = options_.cluster.compute_slots;
  result.records.reserve(invocations_.size());
  SimTime last_completion = kSimStart;
  for (const auto& inv : invocations_) {
    result.records.push_back(inv->record);
    if (inv->record.completion) last_completion = std::max(last_completion, *inv->record.completion);
  }
  result.memory = memory_;
  for (Channel* ch : resources_.channels()) {
    const Channel::Stats& st = ch->stats();
    result.channels.push_back(
        {ch->name(), ch->bandwidth().mbps(), st.delivered, st.busy_time, st.transfers_started, st.peak_active});
  }
  result.queue_probes = probes_;
  result.event_log = engine_.log();
  result.end_time = engine_.Now();
  result.measure_end = measure_end_.value_or(last_completion);
  result.events = engine_.DispatchedCount();
  if (SharingManager* sharing = policy_->sharing()) result.demotions = sharing->Demotions();
  return result;
}

}  // namespace faassim
