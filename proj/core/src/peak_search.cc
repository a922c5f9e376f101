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

#include "faassim/peak_search.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "faassim/metrics.h"

namespace faassim {

PeakProbe EvaluateStability(const SimulationResult& result, Duration duration, SimTime cutoff,
                            const StabilityCriteria& criteria) {
  PeakProbe p;
  const SimTime early_at = kSimStart + Duration(static_cast<Duration::rep>(
                                           std::llround(static_cast<double>(duration.count()) *
                                                        criteria.queue_probe_fraction)));
  const SimTime end_at = kSimStart + duration;
  for (const QueueProbe& q : result.queue_probes) {
    if (q.time == early_at) p.queue_early = q.in_system;
    if (q.time == end_at) p.queue_end = q.in_system;
  }

  const SimTime first_end = kSimStart + duration / 4;
  const SimTime last_begin = kSimStart + duration * 3 / 4;
  std::vector<double> first, last;
  for (const InvocationRecord& r : result.records) {
    if (r.outcome == Outcome::kFailed) continue;
    ++p.arrivals;
    const double ms = ToMillis(r.completion ? *r.completion - r.arrival : cutoff - r.arrival);
    if (r.arrival < first_end) first.push_back(ms);
    if (r.arrival >= last_begin && r.arrival < end_at) last.push_back(ms);
  }
  if (!first.empty()) p.p99_first_ms = Percentile(first, 99);
  if (!last.empty()) p.p99_last_ms = Percentile(last, 99);

  std::ostringstream why;
  const double slack = criteria.queue_slack * static_cast<double>(p.arrivals);
  const bool queue_ok = static_cast<double>(p.queue_end) <= static_cast<double>(p.queue_early) + slack;
  const bool tail_ok = p.p99_last_ms <= criteria.tail_ratio * p.p99_first_ms;
  if (!queue_ok) why << "queue grew " << p.queue_early << "->" << p.queue_end << "; ";
  if (!tail_ok) why << "p99 " << p.p99_first_ms << "->" << p.p99_last_ms << " ms; ";
  p.stable = queue_ok && tail_ok;
  p.reason = p.stable ? "stable" : why.str();
  return p;
}

PeakResult FindPeakThroughput(const StabilityProbe& probe, const PeakSearchOptions& options) {
  if (!(options.min_rate >= 0) || !(options.max_rate > options.min_rate)) {
    throw std::invalid_argument("peak search needs 0 <= min_rate < max_rate");
  }
  if (!(options.resolution > 0)) throw std::invalid_argument("peak search resolution must be positive");

  PeakResult out;
  auto run = [&](double rate) {
    PeakProbe p;
    if (rate == 0) {
      p.stable = true;
      p.reason = "no load";
    } else {
      p = probe(rate);
    }
    p.rate = rate;
    out.trajectory.push_back(p);
    return p.stable;
  };

  if (run(options.max_rate)) {
    out.rate = options.max_rate;
    out.ceiling = true;
    out.diagnostic = "ceiling";
    return out;
  }
  if (!run(options.min_rate)) {
    out.rate = 0;
    out.diagnostic = "unstable at the minimum probe rate " + std::to_string(options.min_rate);
    return out;
  }
  double lo = options.min_rate;
  double hi = options.max_rate;
  int probes = 2;
  while (hi - lo > options.resolution * std::max(lo, options.resolution) && probes < options.max_probes) {
    const double mid = (lo + hi) / 2;
    (run(mid) ? lo : hi) = mid;
    ++probes;
  }
  out.rate = lo;
  out.diagnostic = probes >= options.max_probes ? "probe budget exhausted" : "converged";
  return out;
}

StabilityProbe MakeSimulationProbe(const SimulationOptions& base, const FunctionMix& mix,
                                   const PeakSearchOptions& options) {
  return [base, mix, options](double rate) {
    RngStream rng(base.seed, StreamId::kWorkload);
    PoissonSpec spec{rate, options.duration, mix};
    Simulator sim(base);
    sim.AddArrivals(GeneratePoisson(spec, rng));
    const auto early = static_cast<Duration::rep>(
        std::llround(static_cast<double>(options.duration.count()) * options.criteria.queue_probe_fraction));
    sim.ProbeQueueAt(kSimStart + Duration(early));
    sim.ProbeQueueAt(kSimStart + options.duration);
    sim.SetMeasureEnd(kSimStart + options.duration);
    const SimTime cutoff = kSimStart + options.duration + options.drain;
    SimulationResult result = sim.Run(cutoff);
    return EvaluateStability(result, options.duration, cutoff, options.criteria);
  };
}

}  // namespace faassim
