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

#include "faassim/cluster.h"

#include <stdexcept>
#include <string>

namespace faassim {

void ClusterConfig::Validate() const {
  if (gpus < 1) throw std::invalid_argument("cluster.gpus must be at least 1");
  if (gpus_per_node < 1) throw std::invalid_argument("cluster.gpus_per_node must be at least 1");
  if (gpu_memory.nano() <= 0) throw std::invalid_argument("cluster.gpu_mem_mb must be positive");
  if (cpu_memory && cpu_memory->nano() <= 0) {
    throw std::invalid_argument("cluster.cpu_mem_mb must be positive");
  }
  if (pcie_bandwidth.nano_mb_per_us() <= 0) {
    throw std::invalid_argument("cluster.pcie_bw_mbps must be positive");
  }
  if (host_bandwidth.nano_mb_per_us() <= 0) {
    throw std::invalid_argument("cluster.host_bw_mbps must be positive");
  }
  if (compute_slots < 0) throw std::invalid_argument("cluster.compute_slots must be >= 0");
}

ClusterResources::ClusterResources(Engine& engine, const ClusterConfig& config, Megabytes gpu_granularity)
    : config_(config) {
  config_.Validate();
  for (int g = 0; g < config_.gpus; ++g) {
    gpu_ledgers_.push_back(
        std::make_unique<MemoryLedger>("gpu" + std::to_string(g), config_.gpu_memory, gpu_granularity));
    pcie_channels_.push_back(
        std::make_unique<Channel>(engine, "pcie-gpu" + std::to_string(g), config_.pcie_bandwidth));
  }
  for (int n = 0; n < config_.nodes(); ++n) {
    cpu_ledgers_.push_back(std::make_unique<MemoryLedger>("cpu" + std::to_string(n), config_.cpu_memory,
                                                          MemoryLedger::ExactGranularity()));
    host_channels_.push_back(
        std::make_unique<Channel>(engine, "host-load" + std::to_string(n), config_.host_bandwidth));
  }
}

std::vector<Channel*> ClusterResources::channels() {
  std::vector<Channel*> out;
  for (auto& c : host_channels_) out.push_back(c.get());
  for (auto& c : pcie_channels_) out.push_back(c.get());
  return out;
}

}  // namespace faassim
