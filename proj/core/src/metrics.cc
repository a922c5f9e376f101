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

#include "faassim/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace faassim {

double Percentile(std::vector<double> samples, double p) {
  if (samples.empty()) throw std::invalid_argument("percentile of an empty sample set");
  if (!(p >= 0 && p <= 100)) throw std::invalid_argument("percentile must be within [0, 100]");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, samples.size());
  return samples[rank - 1];
}

double TheoreticalThroughput(double period_ms, double comp_ms) {
  if (!(comp_ms > 0)) throw std::invalid_argument("compute time must be positive");
  return period_ms / comp_ms;
}

std::optional<LatencyStats> ComputeLatencyStats(const std::vector<const InvocationRecord*>& records) {
  std::vector<double> ms;
  for (const InvocationRecord* r : records) {
    if (r->outcome == Outcome::kCompleted) ms.push_back(ToMillis(r->latency()));
  }
  if (ms.empty()) return std::nullopt;
  LatencyStats s;
  s.count = ms.size();
  s.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  s.p50_ms = Percentile(ms, 50);
  s.p99_ms = Percentile(ms, 99);
  s.max_ms = *std::max_element(ms.begin(), ms.end());
  return s;
}

double TimeAveragedMemory(const std::vector<MemorySample>& samples, int gpu, SimTime from, SimTime to) {
  if (to <= from) return 0;
  double area = 0;  // MB * us
  double level = 0;
  SimTime cursor = from;
  for (const MemorySample& s : samples) {
    if (s.gpu != gpu) continue;
    if (s.time > cursor) {
      const SimTime until = std::min(s.time, to);
      if (until > cursor) area += level * static_cast<double>((until - cursor).count());
      cursor = std::max(cursor, until);
    }
    if (s.time >= to) break;
    level = s.total.mb();
  }
  if (to > cursor) area += level * static_cast<double>((to - cursor).count());
  return area / static_cast<double>((to - from).count());
}

RunSummary Summarize(const SimulationResult& result, const FunctionTable& functions) {
  RunSummary s;
  s.policy = result.policy;
  s.seed = result.seed;
  s.gpus = result.gpus;
  s.period_s = ToSeconds(result.measure_end);
  s.end_time_s = ToSeconds(result.end_time);
  s.events = result.events;
  s.demotions = result.demotions;

  std::vector<const InvocationRecord*> all;
  std::map<std::string, std::vector<const InvocationRecord*>> by_function;
  double compute_ms_in_period = 0;
  Megabytes host, pcie;
  for (const InvocationRecord& r : result.records) {
    all.push_back(&r);
    by_function[r.function].push_back(&r);
    FunctionSummary& f = s.functions[r.function];
    ++s.arrivals;
    ++f.arrivals;
    host += r.host_bytes;
    pcie += r.pcie_bytes;
    switch (r.outcome) {
      case Outcome::kCompleted:
        ++s.completed;
        ++f.completed;
        ++s.warmth[std::string(WarmthName(r.warmth))];
        if (*r.completion <= result.measure_end) {
          ++s.completed_in_period;
          auto it = functions.find(r.function);
          if (it != functions.end()) compute_ms_in_period += ToMillis(it->second.compute_time);
        }
        break;
      case Outcome::kFailed:
        ++s.failed;
        ++f.failed;
        break;
      case Outcome::kPending:
        ++s.pending;
        break;
    }
  }
  s.host_mb = host.mb();
  s.pcie_mb = pcie.mb();
  s.latency = ComputeLatencyStats(all);
  for (auto& [name, recs] : by_function) s.functions[name].latency = ComputeLatencyStats(recs);
  if (s.period_s > 0) s.throughput_per_s = static_cast<double>(s.completed_in_period) / s.period_s;

  if (result.compute_slots > 0 && s.completed_in_period > 0 && compute_ms_in_period > 0 && s.period_s > 0) {
    const double mean_comp = compute_ms_in_period / static_cast<double>(s.completed_in_period);
    const double capacity = static_cast<double>(result.gpus) * result.compute_slots;
    s.theoretical_throughput = capacity * TheoreticalThroughput(ToMillis(result.measure_end), mean_comp);
    s.normalized_performance = static_cast<double>(s.completed_in_period) / *s.theoretical_throughput;
  }

  for (int g = 0; g < result.gpus; ++g) {
    const double avg = TimeAveragedMemory(result.memory, g, kSimStart, result.measure_end);
    s.avg_gpu_memory_mb.push_back(avg);
    s.avg_gpu_memory_total_mb += avg;
    double peak = 0;
    for (const MemorySample& m : result.memory) {
      if (m.gpu == g) peak = std::max(peak, m.total.mb());
    }
    s.peak_gpu_memory_mb.push_back(peak);
  }
  const double end_us = static_cast<double>((result.end_time - kSimStart).count());
  for (const ChannelReport& c : result.channels) {
    s.channels.push_back({c.name, c.delivered.mb(),
                          end_us > 0 ? static_cast<double>(c.busy_time.count()) / end_us : 0.0, c.transfers,
                          c.peak_active});
  }
  return s;
}

nlohmann::ordered_json ToJson(const LatencyStats& stats) {
  nlohmann::ordered_json j;
  j["count"] = stats.count;
  j["mean_ms"] = stats.mean_ms;
  j["p50_ms"] = stats.p50_ms;
  j["p99_ms"] = stats.p99_ms;
  j["max_ms"] = stats.max_ms;
  return j;
}

namespace {

nlohmann::ordered_json OptionalJson(const std::optional<LatencyStats>& stats) {
  return stats ? ToJson(*stats) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json ToJson(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["policy"] = s.policy;
  j["seed"] = s.seed;
  j["gpus"] = s.gpus;
  j["arrivals"] = s.arrivals;
  j["completed"] = s.completed;
  j["failed"] = s.failed;
  j["pending"] = s.pending;
  j["period_s"] = s.period_s;
  j["completed_in_period"] = s.completed_in_period;
  j["throughput_per_s"] = s.throughput_per_s;
  j["latency"] = OptionalJson(s.latency);
  j["theoretical_throughput"] = OptionalJson(s.theoretical_throughput);
  j["normalized_performance"] = OptionalJson(s.normalized_performance);
  auto& warmth = j["warmth"] = nlohmann::ordered_json::object();
  for (const auto& [name, n] : s.warmth) warmth[name] = n;
  auto& fns = j["functions"] = nlohmann::ordered_json::object();
  for (const auto& [name, f] : s.functions) {
    nlohmann::ordered_json fj;
    fj["arrivals"] = f.arrivals;
    fj["completed"] = f.completed;
    fj["failed"] = f.failed;
    fj["latency"] = OptionalJson(f.latency);
    fns[name] = std::move(fj);
  }
  j["memory"] = {{"avg_gpu_mb", s.avg_gpu_memory_mb},
                 {"avg_gpu_total_mb", s.avg_gpu_memory_total_mb},
                 {"peak_gpu_mb", s.peak_gpu_memory_mb}};
  auto& chans = j["channels"] = nlohmann::ordered_json::array();
  for (const ChannelSummary& c : s.channels) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["delivered_mb"] = c.delivered_mb;
    cj["utilization"] = c.utilization;
    cj["transfers"] = c.transfers;
    cj["peak_active"] = c.peak_active;
    chans.push_back(std::move(cj));
  }
  j["bytes"] = {{"host_mb", s.host_mb}, {"pcie_mb", s.pcie_mb}};
  j["demotions"] = s.demotions;
  j["events"] = s.events;
  j["end_time_s"] = s.end_time_s;
  return j;
}

std::string FormatMillis(Duration d) {
  const long long us = d.count();
  const long long mag = us < 0 ? -us : us;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", us < 0 ? "-" : "", mag / 1000, mag % 1000);
  return buf;
}

std::string FormatMillis(SimTime t) { return FormatMillis(t - kSimStart); }

std::string FormatMb(Megabytes m) {
  const long long n = m.nano();
  const long long mag = n < 0 ? -n : n;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s%lld.%09lld", n < 0 ? "-" : "", mag / Megabytes::kNanoPerMb,
                mag % Megabytes::kNanoPerMb);
  return buf;
}

void WriteInvocationsCsv(std::ostream& out, const std::vector<InvocationRecord>& records) {
  out << "id,function,gpu,outcome,warmth,arrival_ms,start_ms,completion_ms,queued_ms,latency_ms,host_mb,pcie_mb";
  for (std::size_t k = 0; k < kStageKindCount; ++k) {
    const auto name = StageName(static_cast<StageKind>(k));
    out << ',' << name << "_begin_ms," << name << "_end_ms";
  }
  out << ",failure\n";
  for (const InvocationRecord& r : records) {
    const bool done = r.outcome == Outcome::kCompleted;
    out << r.id << ',' << r.function << ',' << r.gpu << ',' << OutcomeName(r.outcome) << ','
        << (r.start ? WarmthName(r.warmth) : "") << ',' << FormatMillis(r.arrival) << ','
        << (r.start ? FormatMillis(*r.start) : "") << ',' << (r.completion ? FormatMillis(*r.completion) : "")
        << ',' << (r.start ? FormatMillis(r.queued()) : "") << ',' << (done ? FormatMillis(r.latency()) : "")
        << ',' << FormatMb(r.host_bytes) << ',' << FormatMb(r.pcie_bytes);
    for (const auto& st : r.stages) {
      if (st) {
        out << ',' << FormatMillis(st->begin) << ',' << FormatMillis(st->end);
      } else {
        out << ",,";
      }
    }
    out << ',' << r.failure << '\n';
  }
}

void WriteMemoryCsv(std::ostream& out, const std::vector<MemorySample>& samples) {
  out << "time_ms,gpu,context_mb,read_only_mb,writable_mb,instance_mb,total_mb\n";
  for (const MemorySample& s : samples) {
    out << FormatMillis(s.time) << ',' << s.gpu;
    for (Megabytes m : s.by_class) out << ',' << FormatMb(m);
    out << ',' << FormatMb(s.total) << '\n';
  }
}

void WriteEventLogCsv(std::ostream& out, const std::vector<DispatchedEvent>& log) {
  out << "time_ms,kind,seq\n";
  for (const DispatchedEvent& e : log) out << FormatMillis(e.time) << ',' << EventKindName(e.kind) << ',' << e.seq << '\n';
}

}  // namespace faassim
