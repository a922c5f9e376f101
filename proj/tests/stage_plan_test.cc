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

#include <gtest/gtest.h>

#include "faassim/cluster.h"
#include "support/scenarios.h"

namespace faassim {
namespace {

const ClusterConfig kCluster;

double SoloMs(const FunctionSpec& spec, WarmthClass w, PlanMode m) {
  return ToMillis(SoloLatency(PlanInvocation(spec, w, m), kCluster.host_bandwidth, kCluster.pcie_bandwidth));
}

const FunctionSpec& Resnet() { return DefaultFunctionTable().at("resnet50"); }

// Measured per-stage times of resnet50 (ms).
constexpr double kCpuCtx = 1.0, kCpuData = 67.2, kGpuCtx = 285.1, kGpuData = 21.7, kCompute = 24.3,
                 kReturn = 0.1, kHostInput = 3.6, kPcieInput = 0.9;

TEST(StagePlanTest, ResnetClosedForms) {
  EXPECT_NEAR(SoloMs(Resnet(), WarmthClass::kCold, PlanMode::kSerial),
              kCpuCtx + kCpuData + kGpuCtx + kGpuData + kCompute + kReturn, 0.05);
  EXPECT_NEAR(SoloMs(Resnet(), WarmthClass::kCold, PlanMode::kParallel),
              kCpuCtx + std::max(kGpuCtx, kCpuData + kGpuData) + kCompute + kReturn, 0.05);
  EXPECT_NEAR(SoloMs(Resnet(), WarmthClass::kStage1Hot, PlanMode::kParallel),
              kHostInput + kPcieInput + kCompute + kReturn, 0.05);
  EXPECT_NEAR(SoloMs(Resnet(), WarmthClass::kStage2, PlanMode::kParallel), kHostInput + kGpuData + kCompute + kReturn,
              0.05);
  EXPECT_NEAR(SoloMs(Resnet(), WarmthClass::kStage3, PlanMode::kParallel),
              std::max(kGpuCtx, kHostInput + kGpuData) + kCompute + kReturn, 0.05);
  EXPECT_NEAR(SoloMs(Resnet(), WarmthClass::kStage4, PlanMode::kParallel),
              std::max(kGpuCtx, kCpuData + kGpuData) + kCompute + kReturn, 0.05);
}

TEST(StagePlanTest, SerialPlanIsALinearChain) {
  const StagePlan p = PlanInvocation(Resnet(), WarmthClass::kCold, PlanMode::kSerial);
  p.Validate();
  for (std::size_t i = 1; i < p.nodes.size(); ++i) {
    EXPECT_EQ(p.nodes[i].predecessors, std::vector<std::size_t>{i - 1});
  }
  EXPECT_EQ(p.nodes.back().kind, StageKind::kReturn);
}

TEST(StagePlanTest, ParallelPlanJoinsContextAndLoadsAtCompute) {
  const StagePlan p = PlanInvocation(Resnet(), WarmthClass::kCold, PlanMode::kParallel);
  p.Validate();
  const StageNode* compute = p.Find(StageKind::kCompute);
  ASSERT_NE(compute, nullptr);
  ASSERT_EQ(compute->predecessors.size(), 2u);
  std::vector<StageKind> kinds;
  for (std::size_t i : compute->predecessors) kinds.push_back(p.nodes[i].kind);
  EXPECT_NE(std::find(kinds.begin(), kinds.end(), StageKind::kGpuContext), kinds.end());
  EXPECT_NE(std::find(kinds.begin(), kinds.end(), StageKind::kGpuLoad), kinds.end());
}

TEST(StagePlanTest, LoadBytesFollowWarmth) {
  const FunctionSpec& r = Resnet();
  const auto host = [&](WarmthClass w) { return PlanInvocation(r, w, PlanMode::kParallel).BytesFor(StageKind::kCpuLoad); };
  const auto pcie = [&](WarmthClass w) { return PlanInvocation(r, w, PlanMode::kParallel).BytesFor(StageKind::kGpuLoad); };
  EXPECT_EQ(host(WarmthClass::kCold), r.ro_bytes_host + r.input_bytes_host);
  EXPECT_EQ(host(WarmthClass::kStage4), r.ro_bytes_host + r.input_bytes_host);
  EXPECT_EQ(host(WarmthClass::kStage3), r.input_bytes_host);
  EXPECT_EQ(pcie(WarmthClass::kStage3), r.ro_bytes_pcie + r.input_bytes_pcie);
  EXPECT_EQ(pcie(WarmthClass::kStage2), r.ro_bytes_pcie + r.input_bytes_pcie);
  EXPECT_EQ(pcie(WarmthClass::kStage1Hot), r.input_bytes_pcie);
  EXPECT_FALSE(PlanInvocation(r, WarmthClass::kStage2, PlanMode::kParallel).Contains(StageKind::kGpuContext));
  EXPECT_FALSE(PlanInvocation(r, WarmthClass::kStage4, PlanMode::kParallel).Contains(StageKind::kCpuContext));
  EXPECT_TRUE(PlanInvocation(r, WarmthClass::kCold, PlanMode::kParallel).Contains(StageKind::kCpuContext));
}

TEST(StagePlanTest, ParallelNeverSlowerAndWarmthMonotone) {
  const WarmthClass order[] = {WarmthClass::kStage1Hot, WarmthClass::kStage2, WarmthClass::kStage3,
                               WarmthClass::kStage4, WarmthClass::kCold};
  for (const auto& [name, spec] : DefaultFunctionTable()) {
    double prev = 0;
    for (WarmthClass w : order) {
      const double par = SoloMs(spec, w, PlanMode::kParallel);
      const double ser = SoloMs(spec, w, PlanMode::kSerial);
      EXPECT_LE(par, ser) << name << " " << WarmthName(w);
      EXPECT_LE(prev, par) << name << " " << WarmthName(w);
      prev = par;
    }
  }
}

TEST(StagePlanTest, ZeroByteLoadsDegenerateToFixedTimes) {
  FunctionSpec s = testing::WeightlessFunction("w", 10);
  s.cpu_ctx_time = Millis(2);
  s.gpu_ctx_time = Millis(7);
  s.return_time = Millis(1);
  EXPECT_DOUBLE_EQ(SoloMs(s, WarmthClass::kCold, PlanMode::kSerial), 2 + 7 + 10 + 1);
  EXPECT_DOUBLE_EQ(SoloMs(s, WarmthClass::kCold, PlanMode::kParallel), 2 + 7 + 10 + 1);
  EXPECT_FALSE(PlanInvocation(s, WarmthClass::kCold, PlanMode::kParallel).Contains(StageKind::kCpuLoad));
}

TEST(StagePlanTest, ValidateRejectsComputeWithoutLoads) {
  StagePlan p = PlanInvocation(Resnet(), WarmthClass::kCold, PlanMode::kParallel);
  const std::size_t c = static_cast<std::size_t>(p.Find(StageKind::kCompute) - p.nodes.data());
  p.nodes[c].predecessors.pop_back();
  EXPECT_THROW(p.Validate(), SimulationError);
}

TEST(StagePlanTest, AwaitNodesJoinCompute) {
  SetupNeeds n;
  n.await_context = true;
  n.await_read_only = true;
  n.pcie_bytes = Megabytes::FromMb(1);
  for (PlanMode m : {PlanMode::kSerial, PlanMode::kParallel}) {
    const StagePlan p = BuildPlan(Resnet(), n, m);
    p.Validate();
    EXPECT_TRUE(p.Contains(StageKind::kAwaitContext));
    EXPECT_TRUE(p.Contains(StageKind::kAwaitReadOnly));
    EXPECT_FALSE(p.Contains(StageKind::kGpuContext));
  }
}

}  // namespace
}  // namespace faassim
