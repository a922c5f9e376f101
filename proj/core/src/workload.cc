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

#include "faassim/workload.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace faassim {

namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string Trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool ParseDouble(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

FunctionMix::FunctionMix(std::vector<std::pair<std::string, double>> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("function mix is empty");
  double total = 0;
  for (const auto& [name, w] : weights_) {
    if (!(w > 0) || !std::isfinite(w)) {
      throw std::invalid_argument("function mix weight for '" + name + "' must be positive");
    }
    total += w;
    cumulative_.push_back(total);
  }
  for (double& c : cumulative_) c /= total;
}

FunctionMix FunctionMix::Uniform(const FunctionTable& table) {
  std::vector<std::pair<std::string, double>> weights;
  for (const auto& [name, spec] : table) weights.emplace_back(name, 1.0);
  return FunctionMix(std::move(weights));
}

void FunctionMix::Validate(const FunctionTable& table) const {
  for (const auto& [name, w] : weights_) {
    if (!table.contains(name)) throw std::invalid_argument("unknown function '" + name + "'");
  }
}

const std::string& FunctionMix::Sample(RngStream& rng) const {
  if (weights_.empty()) throw std::logic_error("sampling from an empty function mix");
  const double u = rng.NextDouble();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return weights_[static_cast<std::size_t>(it - cumulative_.begin())].first;
}

std::vector<ArrivalRecord> GeneratePoisson(const PoissonSpec& spec, RngStream& rng) {
  if (!(spec.rate_per_s > 0)) throw std::invalid_argument("poisson rate must be positive");
  std::vector<ArrivalRecord> out;
  const double limit = ToSeconds(spec.duration);
  double t = 0;
  while (true) {
    t += rng.Exponential(spec.rate_per_s);
    if (t >= limit) break;
    const auto at = kSimStart + Duration(static_cast<Duration::rep>(std::floor(t * 1e6)));
    out.push_back({at, spec.mix.Sample(rng)});
  }
  return out;
}

TraceParseError::TraceParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

ParsedTrace ParseTrace(std::istream& in, const FunctionTable* known, double time_scale) {
  if (!(time_scale > 0)) throw std::invalid_argument("trace time scale must be positive");
  ParsedTrace trace;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (Trim(line).empty() && in.peek() == std::char_traits<char>::eof()) break;
      if (Trim(line) != "timestamp_ms,function") {
        throw TraceParseError(lineno, "expected header 'timestamp_ms,function'");
      }
      header = true;
      continue;
    }
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsv(line);
    if (fields.size() != 2) {
      throw TraceParseError(lineno, "expected 2 fields, found " + std::to_string(fields.size()));
    }
    double ts = 0;
    if (!ParseDouble(Trim(fields[0]), ts)) throw TraceParseError(lineno, "bad timestamp '" + fields[0] + "'");
    if (ts < 0) throw TraceParseError(lineno, "negative timestamp");
    std::string fn = Trim(fields[1]);
    if (fn.empty()) throw TraceParseError(lineno, "empty function name");
    if (known && !known->contains(fn)) throw TraceParseError(lineno, "unknown function '" + fn + "'");
    trace.arrivals.push_back({AtMillis(ts * time_scale), fn});
    ++trace.totals[fn];
  }
  std::stable_sort(trace.arrivals.begin(), trace.arrivals.end(),
                   [](const ArrivalRecord& a, const ArrivalRecord& b) { return a.time < b.time; });
  return trace;
}

ParsedTrace LoadTrace(const std::filesystem::path& path, const FunctionTable* known, double time_scale) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace " + path.string());
  return ParseTrace(in, known, time_scale);
}

void WriteTrace(std::ostream& out, const std::vector<ArrivalRecord>& arrivals) {
  out << "timestamp_ms,function\n";
  for (const auto& a : arrivals) {
    const auto us = (a.time - kSimStart).count();
    out << us / 1000;
    if (us % 1000 != 0) {
      char frac[8];
      std::snprintf(frac, sizeof frac, ".%03lld", static_cast<long long>(us % 1000));
      out << frac;
    }
    out << ',' << a.function << '\n';
  }
}

std::uint64_t FlattenMafTrace(std::istream& in, std::ostream& out) {
  struct Row {
    std::int64_t ms;
    std::string function;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  constexpr std::size_t kFields = kMinutesPerDay + 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsv(line);
    if (fields.size() != kFields) {
      throw TraceParseError(lineno, "expected " + std::to_string(kFields) + " columns, found " +
                                        std::to_string(fields.size()));
    }
    if (lineno == 1) continue;  // header
    const std::string fn = Trim(fields[0]);
    if (fn.empty()) throw TraceParseError(lineno, "empty function id");
    for (int m = 0; m < kMinutesPerDay; ++m) {
      const std::string cell = Trim(fields[static_cast<std::size_t>(m) + 1]);
      std::int64_t c = 0;
      if (!cell.empty()) {
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), c);
        if (ec != std::errc() || ptr != cell.data() + cell.size() || c < 0) {
          throw TraceParseError(lineno, "bad count '" + cell + "' in minute " + std::to_string(m + 1));
        }
      }
      for (std::int64_t i = 0; i < c; ++i) {
        rows.push_back({m * 60000LL + i * 60000 / c, fn});
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.ms < b.ms; });
  out << "timestamp_ms,function\n";
  for (const Row& r : rows) out << r.ms << ',' << r.function << '\n';
  return rows.size();
}

}  // namespace faassim
