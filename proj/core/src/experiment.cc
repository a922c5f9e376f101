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

#include "faassim/experiment.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace faassim {

namespace {

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

nlohmann::ordered_json Ratio(double num, double den) {
  if (!(den > 0)) return nullptr;
  return num / den;
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::vector<ArrivalRecord> BuildArrivals(const ExperimentConfig& config) {
  const WorkloadConfig& w = config.workload;
  switch (w.kind) {
    case WorkloadConfig::Kind::kPoisson: {
      RngStream rng(config.seed, StreamId::kWorkload);
      return GeneratePoisson(PoissonSpec{w.rate_per_s, w.duration, w.mix}, rng);
    }
    case WorkloadConfig::Kind::kTrace:
      try {
        return LoadTrace(w.trace, &config.functions, w.time_scale).arrivals;
      } catch (const TraceParseError& e) {
        throw ConfigError("workload.path", w.trace.string() + " " + e.what());
      } catch (const std::runtime_error& e) {
        throw ConfigError("workload.path", e.what());
      }
    case WorkloadConfig::Kind::kClosedLoop:
      return {};
  }
  return {};
}

SimulationOptions MakeSimulationOptions(const ExperimentConfig& config, const PolicyConfig& policy) {
  SimulationOptions o;
  o.cluster = config.cluster;
  o.policy = policy;
  o.functions = config.functions;
  o.seed = config.seed;
  o.sample_interval = config.sample_interval;
  o.check_invariants = config.check_invariants;
  o.event_log = config.event_log;
  return o;
}

RunOutput RunVariant(const ExperimentConfig& config, const PolicyVariant& variant,
                     const std::vector<ArrivalRecord>& arrivals) {
  Simulator sim(MakeSimulationOptions(config, variant.Resolve()));
  const WorkloadConfig& w = config.workload;
  if (w.kind == WorkloadConfig::Kind::kClosedLoop) {
    sim.AddClosedLoop(ClosedLoopSpec{w.concurrency, w.count, w.mix});
  } else {
    sim.AddArrivals(arrivals);
  }
  if (w.has_duration && w.kind != WorkloadConfig::Kind::kClosedLoop) sim.SetMeasureEnd(kSimStart + w.duration);
  RunOutput out;
  out.label = variant.label;
  out.result = sim.Run();
  out.summary = Summarize(out.result, config.functions);
  return out;
}

RunOutput RunExperiment(const ExperimentConfig& config) {
  return RunVariant(config, config.policy, BuildArrivals(config));
}

std::vector<PolicyVariant> CompareVariants(const ExperimentConfig& config) {
  if (!config.compare.empty()) return config.compare;
  std::vector<PolicyVariant> out;
  for (PolicyKind k : {PolicyKind::kFixedGsl, PolicyKind::kFixedGslF, PolicyKind::kDgsf, PolicyKind::kSage,
                       PolicyKind::kSageNr}) {
    PolicyVariant v;
    v.kind = k;
    v.label = std::string(PolicyName(k));
    out.push_back(v);
  }
  return out;
}

std::vector<RunOutput> RunCompare(const ExperimentConfig& config) {
  const std::vector<ArrivalRecord> arrivals = BuildArrivals(config);
  std::vector<RunOutput> runs;
  for (const PolicyVariant& v : CompareVariants(config)) runs.push_back(RunVariant(config, v, arrivals));
  return runs;
}

nlohmann::ordered_json CompareJson(const std::vector<RunOutput>& runs) {
  nlohmann::ordered_json j;
  if (runs.empty()) return j;
  const RunSummary& base = runs.front().summary;
  j["baseline"] = runs.front().label;
  auto& rows = j["policies"] = nlohmann::ordered_json::array();
  for (const RunOutput& run : runs) {
    const RunSummary& s = run.summary;
    nlohmann::ordered_json row;
    row["label"] = run.label;
    row["policy"] = s.policy;
    row["completed"] = s.completed;
    row["failed"] = s.failed;
    row["throughput_per_s"] = s.throughput_per_s;
    row["mean_ms"] = s.latency ? nlohmann::ordered_json(s.latency->mean_ms) : nlohmann::ordered_json();
    row["p99_ms"] = s.latency ? nlohmann::ordered_json(s.latency->p99_ms) : nlohmann::ordered_json();
    row["avg_gpu_memory_mb"] = s.avg_gpu_memory_total_mb;
    nlohmann::ordered_json ratios;
    ratios["mean_latency"] = s.latency && base.latency ? Ratio(s.latency->mean_ms, base.latency->mean_ms) : nlohmann::ordered_json();
    ratios["p99_latency"] = s.latency && base.latency ? Ratio(s.latency->p99_ms, base.latency->p99_ms) : nlohmann::ordered_json();
    ratios["throughput"] = Ratio(s.throughput_per_s, base.throughput_per_s);
    ratios["memory"] = Ratio(s.avg_gpu_memory_total_mb, base.avg_gpu_memory_total_mb);
    row["ratios"] = std::move(ratios);
    auto& fns = row["functions"] = nlohmann::ordered_json::object();
    for (const auto& [name, f] : s.functions) {
      nlohmann::ordered_json fj;
      fj["mean_ms"] = f.latency ? nlohmann::ordered_json(f.latency->mean_ms) : nlohmann::ordered_json();
      fj["p99_ms"] = f.latency ? nlohmann::ordered_json(f.latency->p99_ms) : nlohmann::ordered_json();
      auto b = base.functions.find(name);
      const bool both = f.latency && b != base.functions.end() && b->second.latency;
      fj["mean_ratio"] = both ? Ratio(f.latency->mean_ms, b->second.latency->mean_ms) : nlohmann::ordered_json();
      fj["p99_ratio"] = both ? Ratio(f.latency->p99_ms, b->second.latency->p99_ms) : nlohmann::ordered_json();
      fns[name] = std::move(fj);
    }
    rows.push_back(std::move(row));
  }
  return j;
}

void WriteCompareCsv(std::ostream& out, const std::vector<RunOutput>& runs) {
  out << "label,policy,completed,failed,throughput_per_s,mean_ms,p99_ms,avg_gpu_memory_mb,"
         "mean_ratio,p99_ratio,throughput_ratio,memory_ratio\n";
  const nlohmann::ordered_json j = CompareJson(runs);
  auto cell = [](const nlohmann::ordered_json& v) { return v.is_null() ? std::string() : Fixed(v.get<double>()); };
  for (const auto& row : j.value("policies", nlohmann::ordered_json::array())) {
    out << row["label"].get<std::string>() << ',' << row["policy"].get<std::string>() << ','
        << row["completed"].get<std::uint64_t>() << ',' << row["failed"].get<std::uint64_t>() << ','
        << cell(row["throughput_per_s"]) << ',' << cell(row["mean_ms"]) << ',' << cell(row["p99_ms"]) << ','
        << cell(row["avg_gpu_memory_mb"]) << ',' << cell(row["ratios"]["mean_latency"]) << ','
        << cell(row["ratios"]["p99_latency"]) << ',' << cell(row["ratios"]["throughput"]) << ','
        << cell(row["ratios"]["memory"]) << '\n';
  }
}

void WriteRunArtifacts(const std::filesystem::path& dir, const RunOutput& run, bool event_log) {
  std::filesystem::create_directories(dir);
  WriteFile(dir / "summary.json", ToJson(run.summary).dump(2) + "\n");
  std::ostringstream inv, mem;
  WriteInvocationsCsv(inv, run.result.records);
  WriteMemoryCsv(mem, run.result.memory);
  WriteFile(dir / "invocations.csv", inv.str());
  WriteFile(dir / "memory.csv", mem.str());
  if (event_log) {
    std::ostringstream ev;
    WriteEventLogCsv(ev, run.result.event_log);
    WriteFile(dir / "events.csv", ev.str());
  }
}

void WriteCompareArtifacts(const std::filesystem::path& dir, const std::vector<RunOutput>& runs) {
  std::filesystem::create_directories(dir);
  for (const RunOutput& run : runs) WriteRunArtifacts(dir / run.label, run);
  WriteFile(dir / "compare.json", CompareJson(runs).dump(2) + "\n");
  std::ostringstream csv;
  WriteCompareCsv(csv, runs);
  WriteFile(dir / "compare.csv", csv.str());
}

std::string Digest(const RunOutput& run) {
  const RunSummary& s = run.summary;
  std::ostringstream out;
  out << run.label << ": " << s.completed << " completed, " << s.failed << " failed, throughput "
      << Fixed(s.throughput_per_s) << "/s";
  if (s.latency) {
    out << ", mean " << Fixed(s.latency->mean_ms) << " ms, p99 " << Fixed(s.latency->p99_ms) << " ms";
  }
  return out.str();
}

PeakResult RunPeak(const ExperimentConfig& config, const PolicyVariant& variant) {
  const SimulationOptions options = MakeSimulationOptions(config, variant.Resolve());
  return FindPeakThroughput(MakeSimulationProbe(options, config.workload.mix, config.peak), config.peak);
}

void WritePeakTrajectoryCsv(std::ostream& out, const PeakResult& peak) {
  out << "probe,rate_per_s,stable,arrivals,queue_early,queue_end,p99_first_ms,p99_last_ms,reason\n";
  for (std::size_t i = 0; i < peak.trajectory.size(); ++i) {
    const PeakProbe& p = peak.trajectory[i];
    std::string reason = p.reason;
    for (char& c : reason) {
      if (c == ',') c = ' ';
    }
    out << i << ',' << Fixed(p.rate) << ',' << (p.stable ? 1 : 0) << ',' << p.arrivals << ',' << p.queue_early
        << ',' << p.queue_end << ',' << Fixed(p.p99_first_ms) << ',' << Fixed(p.p99_last_ms) << ',' << reason
        << '\n';
  }
}

ExperimentConfig WarmthSweepConfig() {
  ExperimentConfig c;
  c.name = "validate_table5";
  c.functions = DefaultFunctionTable();
  c.policy.kind = PolicyKind::kSage;
  c.policy.label = "SAGE";
  c.workload.kind = WorkloadConfig::Kind::kTrace;
  return c;
}

std::vector<ArrivalRecord> WarmthSweepArrivals() {
  // One arrival per warmth class: the gaps after each completion land in
  // the 30 s exit windows, then beyond the full exit.
  std::vector<ArrivalRecord> out;
  for (double ms : {0.0, 10000.0, 55000.0, 130000.0, 235400.0, 436000.0}) out.push_back({AtMillis(ms), "resnet50"});
  return out;
}

std::vector<LatencyCheck> ValidateWarmthLatencies(const ExperimentConfig& config, const std::vector<ArrivalRecord>& arrivals) {
  if (arrivals.empty()) throw ConfigError("workload", "the validation scenario needs at least one arrival");

  std::vector<LatencyCheck> checks;
  auto check = [&](std::string label, double expected, const std::vector<double>& samples) {
    LatencyCheck c;
    c.label = std::move(label);
    c.expected_ms = expected;
    c.samples = samples.size();
    c.ok = !samples.empty();
    double sum = 0;
    for (double s : samples) {
      sum += s;
      if (std::abs(s - expected) > kWarmthLatencyToleranceMs + 1e-9) c.ok = false;
    }
    c.simulated_ms = samples.empty() ? 0 : sum / static_cast<double>(samples.size());
    checks.push_back(c);
  };

  PolicyVariant baseline;
  baseline.kind = PolicyKind::kFixedGsl;
  baseline.label = "baseline";
  const RunOutput base = RunVariant(config, baseline, {arrivals.front()});
  std::vector<double> base_ms;
  for (const auto& r : base.result.records) {
    if (r.outcome == Outcome::kCompleted) base_ms.push_back(ToMillis(r.latency()));
  }
  check("baseline", 399.4, base_ms);

  const RunOutput run = RunVariant(config, config.policy, arrivals);
  const std::pair<WarmthClass, double> expected[] = {{WarmthClass::kStage1Hot, 28.9},
                                                     {WarmthClass::kStage2, 49.7},
                                                     {WarmthClass::kStage3, 309.5},
                                                     {WarmthClass::kStage4, 309.5},
                                                     {WarmthClass::kCold, 310.5}};
  for (const auto& [warmth, ms] : expected) {
    std::vector<double> samples;
    for (const auto& r : run.result.records) {
      if (r.outcome == Outcome::kCompleted && r.warmth == warmth) samples.push_back(ToMillis(r.latency()));
    }
    check(std::string(WarmthName(warmth)), ms, samples);
  }
  return checks;
}

}  // namespace faassim
