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

#ifndef FAASSIM_WORKLOAD_H_
#define FAASSIM_WORKLOAD_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "faassim/function_spec.h"
#include "faassim/rng.h"
#include "faassim/units.h"

namespace faassim {

struct ArrivalRecord {
  SimTime time;
  std::string function;
  friend bool operator==(const ArrivalRecord&, const ArrivalRecord&) = default;
};

// Weighted choice of function per generated arrival.
class FunctionMix {
 public:
  FunctionMix() = default;
  // Throws std::invalid_argument on an empty mix or a non-positive weight.
  explicit FunctionMix(std::vector<std::pair<std::string, double>> weights);

  static FunctionMix Uniform(const FunctionTable& table);

  const std::vector<std::pair<std::string, double>>& weights() const { return weights_; }
  bool empty() const { return weights_.empty(); }
  // Throws std::invalid_argument naming the first function missing from `table`.
  void Validate(const FunctionTable& table) const;
  // One uniform draw per call.
  const std::string& Sample(RngStream& rng) const;

 private:
  std::vector<std::pair<std::string, double>> weights_;
  std::vector<double> cumulative_;
};

struct PoissonSpec {
  double rate_per_s = 1.0;
  Duration duration = Seconds(60);
  FunctionMix mix;
};

// `concurrency` chains with zero think time; `count` is the total number of
// invocations issued across all chains.
struct ClosedLoopSpec {
  int concurrency = 1;
  std::uint64_t count = 1;
  FunctionMix mix;
};

// Open-loop arrivals with exponential inter-arrival times, in time order.
// Arrivals at or after `duration` are not emitted.
std::vector<ArrivalRecord> GeneratePoisson(const PoissonSpec& spec, RngStream& rng);

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParsedTrace {
  std::vector<ArrivalRecord> arrivals;  // sorted by time, stable
  std::map<std::string, std::uint64_t> totals;
};

// Reads `timestamp_ms,function` CSV (header mandatory). Timestamps are
// multiplied by `time_scale`. When `known` is given, unknown function names
// are rejected.
ParsedTrace ParseTrace(std::istream& in, const FunctionTable* known = nullptr, double time_scale = 1.0);
ParsedTrace LoadTrace(const std::filesystem::path& path, const FunctionTable* known = nullptr,
                      double time_scale = 1.0);
void WriteTrace(std::ostream& out, const std::vector<ArrivalRecord>& arrivals);

inline constexpr int kMinutesPerDay = 1440;

// Converts per-minute count rows (`function,1,...,1440`) into the flat trace
// format, spreading the c invocations of minute m at m*60000 + floor(i*60000/c)
// ms. Returns the number of rows written.
std::uint64_t FlattenMafTrace(std::istream& in, std::ostream& out);

}  // namespace faassim

#endif  // FAASSIM_WORKLOAD_H_
