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

#ifndef FAASSIM_CLUSTER_H_
#define FAASSIM_CLUSTER_H_

#include <memory>
#include <optional>
#include <vector>

#include "faassim/channel.h"
#include "faassim/engine.h"
#include "faassim/memory_ledger.h"
#include "faassim/units.h"

namespace faassim {

// Defaults model one A100 40GB per node, with channel bandwidths calibrated
// so that resnet50's solo host and PCIe loads take 67.2 ms and 21.7 ms.
struct ClusterConfig {
  int gpus = 1;
  int gpus_per_node = 1;
  Megabytes gpu_memory = Megabytes::FromMb(40960);
  std::optional<Megabytes> cpu_memory;  // unlimited when absent
  Bandwidth pcie_bandwidth = Bandwidth::FromMbps(5051);
  Bandwidth host_bandwidth = Bandwidth::FromMbps(1631);
  int compute_slots = 0;  // concurrent Compute stages per GPU; 0 = unlimited

  int nodes() const { return (gpus + gpus_per_node - 1) / gpus_per_node; }
  void Validate() const;
};

// Contended channels and memory ledgers of the simulated cluster: one host
// load channel and one CPU ledger per node, one PCIe channel and one GPU
// ledger per GPU.
class ClusterResources {
 public:
  ClusterResources(Engine& engine, const ClusterConfig& config, Megabytes gpu_granularity);

  const ClusterConfig& config() const { return config_; }
  int gpu_count() const { return config_.gpus; }
  int node_of(int gpu) const { return gpu / config_.gpus_per_node; }

  MemoryLedger& gpu_memory(int gpu) { return *gpu_ledgers_.at(gpu); }
  const MemoryLedger& gpu_memory(int gpu) const { return *gpu_ledgers_.at(gpu); }
  MemoryLedger& host_memory(int gpu) { return *cpu_ledgers_.at(node_of(gpu)); }
  const MemoryLedger& host_memory(int gpu) const { return *cpu_ledgers_.at(node_of(gpu)); }
  Channel& host_channel(int gpu) { return *host_channels_.at(node_of(gpu)); }
  Channel& pcie_channel(int gpu) { return *pcie_channels_.at(gpu); }

  std::vector<Channel*> channels();

 private:
  ClusterConfig config_;
  std::vector<std::unique_ptr<MemoryLedger>> gpu_ledgers_;
  std::vector<std::unique_ptr<MemoryLedger>> cpu_ledgers_;
  std::vector<std::unique_ptr<Channel>> host_channels_;
  std::vector<std::unique_ptr<Channel>> pcie_channels_;
};

}  // namespace faassim

#endif  // FAASSIM_CLUSTER_H_
