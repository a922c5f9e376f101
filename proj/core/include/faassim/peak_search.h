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

#ifndef FAASSIM_PEAK_SEARCH_H_
#define FAASSIM_PEAK_SEARCH_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "faassim/simulator.h"
#include "faassim/workload.h"

namespace faassim {

// A rate is stable when the number of invocations in the system (queued or
// executing) at the end of the arrival window exceeds the number at
// `queue_probe_fraction` of it by at most `queue_slack` times the arrivals in
// the window, and the p99 latency of the last quarter of arrivals is at most
// `tail_ratio` times the p99 of the first quarter.
//
// The slack absorbs the random fluctuation of a stationary backlog; with
// zero slack two samples of a stable system compare either way about half
// the time.
struct StabilityCriteria {
  double queue_probe_fraction = 0.1;
  double tail_ratio = 2.0;
  double queue_slack = 0.01;
};

struct PeakSearchOptions {
  double min_rate = 1.0;    // per second
  double max_rate = 1000.0;  // the ceiling
  double resolution = 0.01;  // relative
  Duration duration = Seconds(60);
  // Simulated time allowed after the last arrival before unfinished
  // invocations are censored.
  Duration drain = Seconds(60);
  StabilityCriteria criteria;
  int max_probes = 64;
};

struct PeakProbe {
  double rate = 0;
  bool stable = false;
  std::uint64_t arrivals = 0;
  std::size_t queue_early = 0;
  std::size_t queue_end = 0;
  double p99_first_ms = 0;
  double p99_last_ms = 0;
  std::string reason;
};

struct PeakResult {
  double rate = 0;
  bool ceiling = false;  // the ceiling itself was stable
  std::vector<PeakProbe> trajectory;
  std::string diagnostic;
};

// Applies the stability test to a finished run whose arrivals spanned
// [0, duration). Invocations still unfinished at `cutoff` count with their
// latency so far.
PeakProbe EvaluateStability(const SimulationResult& result, Duration duration, SimTime cutoff,
                            const StabilityCriteria& criteria);

using StabilityProbe = std::function<PeakProbe(double rate)>;

// Probes the ceiling, then the minimum, then bisects. Assumes stability is
// monotone in the rate.
PeakResult FindPeakThroughput(const StabilityProbe& probe, const PeakSearchOptions& options);

// Probe that simulates a Poisson workload of `mix` at the given rate.
StabilityProbe MakeSimulationProbe(const SimulationOptions& base, const FunctionMix& mix,
                                   const PeakSearchOptions& options);

}  // namespace faassim

#endif  // FAASSIM_PEAK_SEARCH_H_
