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

// Command-line front end: run, compare, peak, trace flatten, validate.
//
// Exit codes: 0 success, 1 simulation failure, 2 configuration error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "faassim/config.h"
#include "faassim/experiment.h"
#include "faassim/workload.h"

namespace {

constexpr int kOk = 0;
constexpr int kSimulationFailure = 1;
constexpr int kConfigError = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string policy;
  std::string out;
  std::vector<std::string> overrides;
};

void AddCommon(CLI::App* cmd, CommonFlags& f, bool config_required, bool with_policy) {
  auto* opt = cmd->add_option("--config", f.config, "Experiment config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--seed", f.seed, "Override the config seed");
  if (with_policy) cmd->add_option("--policy", f.policy, "FixedGSL, FixedGSL-F, DGSF, SAGE or SAGE-NR");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--override", f.overrides, "Dotted-path config override key=value (repeatable)");
}

faassim::ExperimentConfig Load(const CommonFlags& f) {
  faassim::ExperimentConfig c = faassim::LoadConfig(f.config, f.overrides);
  if (f.seed) c.seed = *f.seed;
  if (!f.policy.empty()) {
    try {
      c.policy.kind = faassim::ParsePolicyKind(f.policy);
    } catch (const std::invalid_argument& e) {
      throw faassim::ConfigError("--policy", e.what());
    }
    c.policy.label = std::string(faassim::PolicyName(c.policy.kind));
  }
  if (!f.out.empty()) c.output = f.out;
  return c;
}

int CmdRun(const CommonFlags& f, bool event_log) {
  faassim::ExperimentConfig c = Load(f);
  c.event_log = event_log;
  faassim::RunOutput run = faassim::RunExperiment(c);
  faassim::WriteRunArtifacts(c.output, run, event_log);
  std::cout << faassim::Digest(run) << "\n";
  return kOk;
}

int CmdCompare(const CommonFlags& f, const std::vector<std::string>& policies) {
  faassim::ExperimentConfig c = Load(f);
  if (!policies.empty()) {
    c.compare.clear();
    for (const std::string& p : policies) {
      faassim::PolicyVariant v;
      try {
        v.kind = faassim::ParsePolicyKind(p);
      } catch (const std::invalid_argument& e) {
        throw faassim::ConfigError("--policies", e.what());
      }
      v.label = std::string(faassim::PolicyName(v.kind));
      // Repeated names get distinct output directories.
      int dup = 0;
      for (const auto& prev : c.compare) dup += prev.kind == v.kind;
      if (dup > 0) v.label += "#" + std::to_string(dup + 1);
      c.compare.push_back(v);
    }
  }
  const auto runs = faassim::RunCompare(c);
  faassim::WriteCompareArtifacts(c.output, runs);
  for (const auto& run : runs) std::cout << faassim::Digest(run) << "\n";
  return kOk;
}

int CmdPeak(const CommonFlags& f) {
  const faassim::ExperimentConfig c = Load(f);
  const faassim::PeakResult peak = faassim::RunPeak(c, c.policy);
  std::filesystem::create_directories(c.output);
  std::ofstream traj(c.output / "peak_trajectory.csv");
  faassim::WritePeakTrajectoryCsv(traj, peak);
  std::printf("%s peak: %.3f/s (%s)\n", c.policy.label.c_str(), peak.rate, peak.diagnostic.c_str());
  return kOk;
}

int CmdFlatten(const std::string& input, const std::string& output) {
  std::ifstream in(input);
  if (!in) throw faassim::ConfigError("input", "cannot open " + input);
  std::ofstream out(output);
  if (!out) throw faassim::ConfigError("output", "cannot write " + output);
  const std::uint64_t rows = faassim::FlattenMafTrace(in, out);
  std::cout << rows << " rows written to " << output << "\n";
  return kOk;
}

int CmdValidate(const CommonFlags& f) {
  faassim::ExperimentConfig c;
  std::vector<faassim::ArrivalRecord> arrivals;
  if (f.config.empty()) {
    c = faassim::WarmthSweepConfig();
    if (f.seed) c.seed = *f.seed;
    arrivals = faassim::WarmthSweepArrivals();
  } else {
    c = Load(f);
    arrivals = faassim::BuildArrivals(c);
  }
  bool ok = true;
  for (const auto& check : faassim::ValidateWarmthLatencies(c, arrivals)) {
    std::printf("%-8s expected %7.1f ms  simulated %9.3f ms  (%llu samples)  %s\n", check.label.c_str(),
                check.expected_ms, check.simulated_ms, static_cast<unsigned long long>(check.samples),
                check.ok ? "ok" : "MISMATCH");
    ok = ok && check.ok;
  }
  return ok ? kOk : kSimulationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"faassim: discrete-event simulator of GPU serverless scheduling policies"};
  app.require_subcommand(1);

  CommonFlags run_flags, cmp_flags, peak_flags, val_flags;
  bool event_log = false;
  std::vector<std::string> policies;
  std::string flat_in, flat_out;

  auto* run = app.add_subcommand("run", "Run one simulation and write summary.json, invocations.csv, memory.csv");
  AddCommon(run, run_flags, true, true);
  run->add_flag("--event-log", event_log, "Also write the dispatched event log (events.csv)");

  auto* cmp = app.add_subcommand("compare", "Run several policies on one arrival stream");
  AddCommon(cmp, cmp_flags, true, false);
  cmp->add_option("--policies", policies, "Policies to compare, first is the ratio baseline")->delimiter(',');

  auto* peak = app.add_subcommand("peak", "Search for the largest stable Poisson rate");
  AddCommon(peak, peak_flags, true, true);

  auto* trace = app.add_subcommand("trace", "Trace utilities");
  trace->require_subcommand(1);
  auto* flatten = trace->add_subcommand("flatten", "Spread per-minute counts into timestamp_ms,function rows");
  flatten->add_option("input", flat_in, "Per-minute count CSV")->required();
  flatten->add_option("output", flat_out, "Flat trace CSV")->required();

  auto* val = app.add_subcommand("validate", "Check the resnet50 warmth-class latencies");
  AddCommon(val, val_flags, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*run) return CmdRun(run_flags, event_log);
    if (*cmp) return CmdCompare(cmp_flags, policies);
    if (*peak) return CmdPeak(peak_flags);
    if (*flatten) return CmdFlatten(flat_in, flat_out);
    if (*val) return CmdValidate(val_flags);
  } catch (const faassim::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const faassim::SpecParseError& e) {
    std::cerr << "function table: " << e.what() << "\n";
    return kConfigError;
  } catch (const faassim::TraceParseError& e) {
    std::cerr << "trace: " << e.what() << "\n";
    return kConfigError;
  } catch (const faassim::SimulationError& e) {
    std::cerr << "simulation failed: " << e.what() << "\n";
    return kSimulationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSimulationFailure;
  }
  return kConfigError;
}
