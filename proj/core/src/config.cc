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

#include "faassim/config.h"

#include <cmath>
#include <fstream>
#include <set>

namespace faassim {

using nlohmann::json;

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error("config error at '" + path + "': " + message), path_(std::move(path)) {}

namespace {

std::string Join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Strict reader over one JSON object: every present key must be consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool Has(const std::string& key) const { return j_.contains(key); }
  std::string PathOf(const std::string& key) const { return Join(path_, key); }

  const json* Get(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double Number(const std::string& key, double fallback) {
    const json* v = Get(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(PathOf(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(PathOf(key), "must be finite");
    return d;
  }
  double Positive(const std::string& key, double fallback) {
    const double d = Number(key, fallback);
    if (!(d > 0)) throw ConfigError(PathOf(key), "must be positive");
    return d;
  }
  double NonNegative(const std::string& key, double fallback) {
    const double d = Number(key, fallback);
    if (d < 0) throw ConfigError(PathOf(key), "must be non-negative");
    return d;
  }
  std::int64_t Integer(const std::string& key, std::int64_t fallback, std::int64_t min) {
    const json* v = Get(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(PathOf(key), "expected an integer");
    const auto i = v->get<std::int64_t>();
    if (i < min) throw ConfigError(PathOf(key), "must be at least " + std::to_string(min));
    return i;
  }
  bool Bool(const std::string& key, bool fallback) {
    const json* v = Get(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(PathOf(key), "expected true or false");
    return v->get<bool>();
  }
  std::optional<bool> OptBool(const std::string& key) {
    if (!Has(key)) return std::nullopt;
    return Bool(key, false);
  }
  std::string String(const std::string& key, const std::string& fallback) {
    const json* v = Get(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(PathOf(key), "expected a string");
    return v->get<std::string>();
  }

  void Done() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(PathOf(key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

PolicyKind ParseKind(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a policy name");
  try {
    return ParsePolicyKind(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

Ablation ParseAblation(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Ablation a;
  if (r.Has("plan_mode")) {
    const std::string mode = r.String("plan_mode", "");
    if (mode == "serial") {
      a.plan_mode = PlanMode::kSerial;
    } else if (mode == "parallel") {
      a.plan_mode = PlanMode::kParallel;
    } else {
      throw ConfigError(r.PathOf("plan_mode"), "expected \"serial\" or \"parallel\"");
    }
  }
  a.ro_sharing = r.OptBool("ro_sharing");
  a.ctx_sharing = r.OptBool("ctx_sharing");
  a.multi_stage_exit = r.OptBool("multi_stage_exit");
  if (r.Has("granularity_mb")) {
    const json& g = *r.Get("granularity_mb");
    if (g.is_string() && g.get<std::string>() == "exact") {
      a.granularity = MemoryLedger::ExactGranularity();
    } else if (g.is_number() && g.get<double>() > 0) {
      a.granularity = Megabytes::FromMb(g.get<double>());
    } else {
      throw ConfigError(r.PathOf("granularity_mb"), "expected a positive number or \"exact\"");
    }
  }
  if (r.Has("pre_created_contexts")) {
    a.pre_created_contexts = static_cast<int>(r.Integer("pre_created_contexts", 0, 0));
  }
  if (r.Has("dgsf_ctx_ttl")) {
    const json& t = *r.Get("dgsf_ctx_ttl");
    if (t.is_null()) {
      a.dgsf_ctx_ttl = std::optional<Duration>();
    } else if (t.is_number() && t.get<double>() > 0) {
      a.dgsf_ctx_ttl = std::optional<Duration>(Seconds(t.get<double>()));
    } else {
      throw ConfigError(r.PathOf("dgsf_ctx_ttl"), "expected positive seconds or null");
    }
  }
  if (r.Has("keep_alive_s")) a.keep_alive = Seconds(r.NonNegative("keep_alive_s", 0));
  if (r.Has("stage_interval_s")) {
    const json& s = *r.Get("stage_interval_s");
    std::array<Duration, 4> iv{};
    const std::string p = r.PathOf("stage_interval_s");
    if (s.is_number()) {
      if (!(s.get<double>() > 0)) throw ConfigError(p, "must be positive");
      iv.fill(Seconds(s.get<double>()));
    } else if (s.is_array() && s.size() == 4) {
      for (std::size_t i = 0; i < 4; ++i) {
        if (!s[i].is_number() || !(s[i].get<double>() > 0)) {
          throw ConfigError(p + "[" + std::to_string(i) + "]", "must be a positive number");
        }
        iv[i] = Seconds(s[i].get<double>());
      }
    } else {
      throw ConfigError(p, "expected a positive number or an array of four");
    }
    a.stage_intervals = iv;
  }
  r.Done();
  return a;
}

PolicyVariant ParseVariant(const json& v, const std::string& path) {
  PolicyVariant variant;
  if (v.is_string()) {
    variant.kind = ParseKind(v, path);
    variant.label = std::string(PolicyName(variant.kind));
    return variant;
  }
  ObjectReader r(v, path);
  const json* p = r.Get("policy");
  if (!p) throw ConfigError(r.PathOf("policy"), "missing");
  variant.kind = ParseKind(*p, r.PathOf("policy"));
  variant.label = r.String("label", std::string(PolicyName(variant.kind)));
  if (const json* a = r.Get("ablation")) variant.ablation = ParseAblation(*a, r.PathOf("ablation"));
  r.Done();
  return variant;
}

ClusterConfig ParseCluster(const json& j) {
  ObjectReader r(j, "cluster");
  ClusterConfig c;
  c.gpus = static_cast<int>(r.Integer("gpus", c.gpus, 1));
  c.gpus_per_node = static_cast<int>(r.Integer("gpus_per_node", c.gpus_per_node, 1));
  c.gpu_memory = Megabytes::FromMb(r.Positive("gpu_mem_mb", c.gpu_memory.mb()));
  if (const json* cpu = r.Get("cpu_mem_mb"); cpu && !cpu->is_null()) {
    if (!cpu->is_number() || !(cpu->get<double>() > 0)) {
      throw ConfigError("cluster.cpu_mem_mb", "expected a positive number or null");
    }
    c.cpu_memory = Megabytes::FromMb(cpu->get<double>());
  }
  c.pcie_bandwidth = Bandwidth::FromMbps(r.Positive("pcie_bw_mbps", c.pcie_bandwidth.mbps()));
  c.host_bandwidth = Bandwidth::FromMbps(r.Positive("host_bw_mbps", c.host_bandwidth.mbps()));
  c.compute_slots = static_cast<int>(r.Integer("compute_slots", c.compute_slots, 0));
  r.Done();
  return c;
}

FunctionTable ParseFunctions(const json* j, const std::filesystem::path& base_dir) {
  if (!j || (j->is_string() && j->get<std::string>() == "default")) return DefaultFunctionTable();
  try {
    if (j->is_string()) {
      std::filesystem::path p = j->get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      return LoadFunctionTable(p);
    }
    return ParseFunctionTable(*j);
  } catch (const SpecParseError& e) {
    throw ConfigError("functions", e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError("functions", e.what());
  }
}

FunctionMix ParseMix(const json* j, const std::string& path, const FunctionTable& table) {
  if (!j) return FunctionMix::Uniform(table);
  std::vector<std::pair<std::string, double>> weights;
  if (j->is_array()) {
    for (const json& name : *j) {
      if (!name.is_string()) throw ConfigError(path, "expected function names");
      weights.emplace_back(name.get<std::string>(), 1.0);
    }
  } else if (j->is_object()) {
    for (const auto& [name, w] : j->items()) {
      if (!w.is_number() || !(w.get<double>() > 0)) throw ConfigError(Join(path, name), "weight must be positive");
      weights.emplace_back(name, w.get<double>());
    }
  } else {
    throw ConfigError(path, "expected an array of names or an object of weights");
  }
  for (const auto& [name, w] : weights) {
    if (!table.contains(name)) throw ConfigError(path, "unknown function '" + name + "'");
  }
  try {
    return FunctionMix(std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

WorkloadConfig ParseWorkload(const json& j, const FunctionTable& table, const std::filesystem::path& base_dir) {
  ObjectReader r(j, "workload");
  WorkloadConfig w;
  const std::string kind = r.String("kind", "poisson");
  if (kind == "poisson") {
    w.kind = WorkloadConfig::Kind::kPoisson;
    w.rate_per_s = r.Positive("rate_per_s", w.rate_per_s);
    w.duration = Seconds(r.Positive("duration_s", ToSeconds(w.duration)));
    w.has_duration = true;
    w.mix = ParseMix(r.Get("mix"), "workload.mix", table);
  } else if (kind == "closed_loop") {
    w.kind = WorkloadConfig::Kind::kClosedLoop;
    w.concurrency = static_cast<int>(r.Integer("concurrency", w.concurrency, 1));
    w.count = static_cast<std::uint64_t>(r.Integer("count", static_cast<std::int64_t>(w.count), 1));
    w.mix = ParseMix(r.Get("mix"), "workload.mix", table);
  } else if (kind == "trace") {
    w.kind = WorkloadConfig::Kind::kTrace;
    const std::string p = r.String("path", "");
    if (p.empty()) throw ConfigError("workload.path", "missing trace path");
    w.trace = p;
    if (w.trace.is_relative()) w.trace = base_dir / w.trace;
    w.time_scale = r.Positive("time_scale", 1.0);
    if (r.Has("duration_s")) {
      w.duration = Seconds(r.Positive("duration_s", 0));
      w.has_duration = true;
    }
  } else {
    throw ConfigError("workload.kind", "expected poisson, closed_loop or trace");
  }
  r.Done();
  return w;
}

PeakSearchOptions ParsePeak(const json& j) {
  ObjectReader r(j, "peak");
  PeakSearchOptions p;
  p.min_rate = r.NonNegative("min_rate", p.min_rate);
  p.max_rate = r.Positive("max_rate", p.max_rate);
  if (!(p.max_rate > p.min_rate)) throw ConfigError("peak.max_rate", "must exceed peak.min_rate");
  p.resolution = r.Positive("resolution", p.resolution);
  p.duration = Seconds(r.Positive("duration_s", ToSeconds(p.duration)));
  p.drain = Seconds(r.NonNegative("drain_s", ToSeconds(p.drain)));
  p.criteria.queue_probe_fraction = r.Positive("queue_probe_fraction", p.criteria.queue_probe_fraction);
  if (p.criteria.queue_probe_fraction >= 1) throw ConfigError("peak.queue_probe_fraction", "must be below 1");
  p.criteria.tail_ratio = r.Positive("tail_ratio", p.criteria.tail_ratio);
  p.criteria.queue_slack = r.NonNegative("queue_slack", p.criteria.queue_slack);
  p.max_probes = static_cast<int>(r.Integer("max_probes", p.max_probes, 2));
  r.Done();
  return p;
}

}  // namespace

PolicyConfig Ablation::Apply(PolicyConfig c) const {
  if (plan_mode) c.plan_mode = *plan_mode;
  if (ro_sharing) c.ro_sharing = *ro_sharing;
  if (ctx_sharing) c.ctx_sharing = *ctx_sharing;
  if (multi_stage_exit) c.multi_stage_exit = *multi_stage_exit;
  if (granularity) c.granularity = *granularity;
  if (pre_created_contexts) c.pre_created_contexts = *pre_created_contexts;
  if (dgsf_ctx_ttl) c.dgsf_ctx_ttl = *dgsf_ctx_ttl;
  if (keep_alive) c.keep_alive = *keep_alive;
  if (stage_intervals) c.stage_intervals = *stage_intervals;
  return c;
}

std::string_view WorkloadKindName(WorkloadConfig::Kind kind) {
  switch (kind) {
    case WorkloadConfig::Kind::kPoisson:
      return "poisson";
    case WorkloadConfig::Kind::kClosedLoop:
      return "closed_loop";
    case WorkloadConfig::Kind::kTrace:
      return "trace";
  }
  return "unknown";
}

void ApplyOverride(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(std::string(assignment), "override must look like key.path=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::size_t begin = 0;
  while (true) {
    const auto dot = key.find('.', begin);
    const std::string part = key.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (part.empty()) throw ConfigError(key, "empty path component");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError(key, "'" + part + "' is not inside an object");
      *node = json::object();
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  *node = std::move(value);
}

ExperimentConfig ParseConfig(const json& doc, const std::filesystem::path& base_dir) {
  ObjectReader r(doc, "");
  ExperimentConfig c;
  c.name = r.String("name", "experiment");
  r.String("description", "");
  if (const json* cl = r.Get("cluster")) c.cluster = ParseCluster(*cl);
  try {
    c.cluster.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("cluster", e.what());
  }
  c.functions = ParseFunctions(r.Get("functions"), base_dir);

  const json* pol = r.Get("policy");
  c.policy.kind = pol ? ParseKind(*pol, "policy") : PolicyKind::kSage;
  c.policy.label = std::string(PolicyName(c.policy.kind));
  if (const json* a = r.Get("ablation")) c.policy.ablation = ParseAblation(*a, "ablation");

  if (const json* cmp = r.Get("compare")) {
    if (!cmp->is_array() || cmp->empty()) throw ConfigError("compare", "expected a non-empty array");
    for (std::size_t i = 0; i < cmp->size(); ++i) {
      c.compare.push_back(ParseVariant((*cmp)[i], "compare[" + std::to_string(i) + "]"));
    }
  }

  if (const json* w = r.Get("workload")) {
    c.workload = ParseWorkload(*w, c.functions, base_dir);
  } else {
    c.workload.mix = FunctionMix::Uniform(c.functions);
    c.workload.has_duration = true;
  }
  c.seed = static_cast<std::uint64_t>(r.Integer("seed", 1, 0));
  c.output = r.String("output", "out");
  if (const json* p = r.Get("peak")) c.peak = ParsePeak(*p);
  c.sample_interval = Millis(r.Positive("sample_interval_ms", 100));
  c.check_invariants = r.Bool("check_invariants", false);
  r.Done();
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
  if (doc.is_discarded()) throw ConfigError("<file>", path.string() + " is not valid JSON");
  for (const std::string& o : overrides) ApplyOverride(doc, o);
  return ParseConfig(doc, path.parent_path());
}

}  // namespace faassim
