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

#include "faassim/stage_plan.h"

#include <algorithm>
#include <optional>

#include "faassim/engine.h"

namespace faassim {

std::string_view WarmthName(WarmthClass warmth) {
  switch (warmth) {
    case WarmthClass::kCold:
      return "cold";
    case WarmthClass::kStage4:
      return "stage4";
    case WarmthClass::kStage3:
      return "stage3";
    case WarmthClass::kStage2:
      return "stage2";
    case WarmthClass::kStage1Hot:
      return "stage1";
  }
  return "unknown";
}

std::string_view PlanModeName(PlanMode mode) {
  return mode == PlanMode::kSerial ? "serial" : "parallel";
}

std::string_view StageName(StageKind kind) {
  switch (kind) {
    case StageKind::kContainer:
      return "container";
    case StageKind::kCpuContext:
      return "cpu_ctx";
    case StageKind::kCpuLoad:
      return "cpu_data";
    case StageKind::kGpuContext:
      return "gpu_ctx";
    case StageKind::kGpuLoad:
      return "gpu_data";
    case StageKind::kAwaitContext:
      return "await_ctx";
    case StageKind::kAwaitReadOnly:
      return "await_ro";
    case StageKind::kCompute:
      return "compute";
    case StageKind::kReturn:
      return "return";
  }
  return "unknown";
}

bool IsLoad(StageKind kind) { return kind == StageKind::kCpuLoad || kind == StageKind::kGpuLoad; }

bool StagePlan::Contains(StageKind kind) const { return Find(kind) != nullptr; }

const StageNode* StagePlan::Find(StageKind kind) const {
  for (const StageNode& n : nodes) {
    if (n.kind == kind) return &n;
  }
  return nullptr;
}

Megabytes StagePlan::BytesFor(StageKind load) const {
  const StageNode* n = Find(load);
  return n ? n->bytes : Megabytes{};
}

void StagePlan::Validate() const {
  std::optional<std::size_t> compute;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t p : nodes[i].predecessors) {
      if (p >= i) throw SimulationError("stage plan is not in topological order");
    }
    if (nodes[i].kind == StageKind::kCompute) compute = i;
  }
  if (!compute) throw SimulationError("stage plan has no compute stage");

  // Compute must (transitively) follow every GPU-side readiness stage.
  std::vector<bool> before(nodes.size(), false);
  std::vector<std::size_t> stack = {*compute};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t p : nodes[i].predecessors) {
      if (!before[p]) {
        before[p] = true;
        stack.push_back(p);
      }
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const StageKind k = nodes[i].kind;
    const bool readiness = k == StageKind::kGpuContext || k == StageKind::kAwaitContext ||
                           k == StageKind::kGpuLoad || k == StageKind::kAwaitReadOnly ||
                           k == StageKind::kCpuLoad;
    if (readiness && !before[i]) {
      throw SimulationError("compute does not wait for stage " + std::string(StageName(k)));
    }
    if (k == StageKind::kReturn &&
        std::find(nodes[i].predecessors.begin(), nodes[i].predecessors.end(), *compute) ==
            nodes[i].predecessors.end()) {
      throw SimulationError("return does not depend on compute");
    }
  }
}

SetupNeeds NeedsForWarmth(const FunctionSpec& spec, WarmthClass warmth) {
  SetupNeeds n;
  const Megabytes ro_host = spec.ro_bytes_host + spec.input_bytes_host;
  const Megabytes ro_pcie = spec.ro_bytes_pcie + spec.input_bytes_pcie;
  switch (warmth) {
    case WarmthClass::kCold:
      n.container = true;
      n.cpu_context = true;
      [[fallthrough]];
    case WarmthClass::kStage4:
      n.gpu_context = true;
      n.host_bytes = ro_host;
      n.pcie_bytes = ro_pcie;
      break;
    case WarmthClass::kStage3:
      n.gpu_context = true;
      n.host_bytes = spec.input_bytes_host;
      n.pcie_bytes = ro_pcie;
      break;
    case WarmthClass::kStage2:
      n.host_bytes = spec.input_bytes_host;
      n.pcie_bytes = ro_pcie;
      break;
    case WarmthClass::kStage1Hot:
      n.host_bytes = spec.input_bytes_host;
      n.pcie_bytes = spec.input_bytes_pcie;
      break;
  }
  return n;
}

namespace {

class PlanBuilder {
 public:
  std::size_t Add(StageKind kind, std::vector<std::size_t> preds, Duration d = {}, Megabytes b = {}) {
    plan_.nodes.push_back(StageNode{kind, d, b, std::move(preds)});
    return plan_.nodes.size() - 1;
  }
  StagePlan Take() { return std::move(plan_); }

 private:
  StagePlan plan_;
};

std::vector<std::size_t> After(std::optional<std::size_t> tail) {
  if (tail) return {*tail};
  return {};
}

}  // namespace

StagePlan BuildPlan(const FunctionSpec& spec, const SetupNeeds& needs, PlanMode mode) {
  PlanBuilder b;
  std::optional<std::size_t> tail;
  auto chain = [&](StageKind kind, Duration d = {}, Megabytes bytes = {}) {
    tail = b.Add(kind, After(tail), d, bytes);
  };

  if (needs.container) chain(StageKind::kContainer, spec.container_time);
  if (needs.cpu_context) chain(StageKind::kCpuContext, spec.cpu_ctx_time);

  if (mode == PlanMode::kSerial) {
    if (needs.host_bytes.nano() > 0) chain(StageKind::kCpuLoad, {}, needs.host_bytes);
    if (needs.gpu_context) chain(StageKind::kGpuContext, spec.gpu_ctx_time);
    if (needs.await_context) chain(StageKind::kAwaitContext);
    if (needs.pcie_bytes.nano() > 0) chain(StageKind::kGpuLoad, {}, needs.pcie_bytes);
    if (needs.await_read_only) chain(StageKind::kAwaitReadOnly);
    chain(StageKind::kCompute, spec.compute_time);
  } else {
    // GPU data preparation runs in a separate process, so the context branch
    // and the load branch proceed side by side and join at compute.
    const std::optional<std::size_t> root = tail;
    std::vector<std::size_t> joins;
    if (needs.gpu_context) joins.push_back(b.Add(StageKind::kGpuContext, After(root), spec.gpu_ctx_time));
    if (needs.await_context) joins.push_back(b.Add(StageKind::kAwaitContext, After(root)));
    std::optional<std::size_t> load_tail = root;
    bool has_load = false;
    if (needs.host_bytes.nano() > 0) {
      load_tail = b.Add(StageKind::kCpuLoad, After(load_tail), {}, needs.host_bytes);
      has_load = true;
    }
    if (needs.pcie_bytes.nano() > 0) {
      load_tail = b.Add(StageKind::kGpuLoad, After(load_tail), {}, needs.pcie_bytes);
      has_load = true;
    }
    if (has_load) joins.push_back(*load_tail);
    if (needs.await_read_only) joins.push_back(b.Add(StageKind::kAwaitReadOnly, After(root)));
    if (joins.empty() && root) joins.push_back(*root);
    tail = b.Add(StageKind::kCompute, joins, spec.compute_time);
  }
  chain(StageKind::kReturn, spec.return_time);
  return b.Take();
}

Duration SoloLatency(const StagePlan& plan, Bandwidth host, Bandwidth pcie) {
  std::vector<Duration> finish(plan.nodes.size());
  Duration longest{};
  for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
    const StageNode& n = plan.nodes[i];
    Duration start{};
    for (std::size_t p : n.predecessors) start = std::max(start, finish[p]);
    Duration d = n.duration;
    if (n.kind == StageKind::kCpuLoad) d = SoloTransferTime(n.bytes, host);
    if (n.kind == StageKind::kGpuLoad) d = SoloTransferTime(n.bytes, pcie);
    finish[i] = start + d;
    longest = std::max(longest, finish[i]);
  }
  return longest;
}

}  // namespace faassim
