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

#ifndef FAASSIM_CONFIG_H_
#define FAASSIM_CONFIG_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "faassim/cluster.h"
#include "faassim/function_spec.h"
#include "faassim/peak_search.h"
#include "faassim/policy.h"
#include "faassim/workload.h"

namespace faassim {

// Invalid experiment configuration. `path` is the dotted key at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Mechanism flags that override a policy preset. Unset fields keep the
// preset's value.
struct Ablation {
  std::optional<PlanMode> plan_mode;
  std::optional<bool> ro_sharing;
  std::optional<bool> ctx_sharing;
  std::optional<bool> multi_stage_exit;
  std::optional<Megabytes> granularity;
  std::optional<int> pre_created_contexts;
  std::optional<std::optional<Duration>> dgsf_ctx_ttl;
  std::optional<Duration> keep_alive;
  std::optional<std::array<Duration, 4>> stage_intervals;

  PolicyConfig Apply(PolicyConfig base) const;
};

struct PolicyVariant {
  std::string label;
  PolicyKind kind = PolicyKind::kSage;
  Ablation ablation;

  PolicyConfig Resolve() const { return ablation.Apply(PolicyConfig::Preset(kind)); }
};

struct WorkloadConfig {
  enum class Kind { kPoisson, kClosedLoop, kTrace };
  Kind kind = Kind::kPoisson;
  double rate_per_s = 10;
  Duration duration = Seconds(60);  // Poisson window; optional measurement window for traces
  bool has_duration = false;
  int concurrency = 1;
  std::uint64_t count = 100;
  FunctionMix mix;
  std::filesystem::path trace;
  double time_scale = 1.0;
};

struct ExperimentConfig {
  std::string name;
  ClusterConfig cluster;
  FunctionTable functions;
  PolicyVariant policy;
  std::vector<PolicyVariant> compare;  // empty means the five presets
  WorkloadConfig workload;
  std::uint64_t seed = 1;
  std::filesystem::path output = "out";
  PeakSearchOptions peak;
  Duration sample_interval = Millis(100);
  bool check_invariants = false;
  bool event_log = false;  // set from the command line
};

// Sets `key.path=value` in a JSON document. The value is parsed as JSON
// when possible and taken as a string otherwise. Throws ConfigError.
void ApplyOverride(nlohmann::json& doc, std::string_view assignment);

// Strict parse: unknown keys, wrong types and out-of-range values raise
// ConfigError. Relative paths resolve against `base_dir`.
ExperimentConfig ParseConfig(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig LoadConfig(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

std::string_view WorkloadKindName(WorkloadConfig::Kind kind);

}  // namespace faassim

#endif  // FAASSIM_CONFIG_H_
