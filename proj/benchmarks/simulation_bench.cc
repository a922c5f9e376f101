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

#include <benchmark/benchmark.h>

#include "faassim/simulator.h"
#include "faassim/workload.h"

namespace faassim {
namespace {

void BM_PoissonMix(benchmark::State& state) {
  const auto kind = static_cast<PolicyKind>(state.range(0));
  RngStream rng(1, StreamId::kWorkload);
  const auto arrivals =
      GeneratePoisson(PoissonSpec{50, Seconds(60), FunctionMix::Uniform(DefaultFunctionTable())}, rng);
  std::uint64_t events = 0;
  for (auto _ : state) {
    SimulationOptions o;
    o.policy = PolicyConfig::Preset(kind);
    Simulator sim(o);
    sim.AddArrivals(arrivals);
    events = sim.Run().events;
  }
  state.SetLabel(std::string(PolicyName(kind)));
  state.counters["events"] = static_cast<double>(events);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(arrivals.size()));
}
BENCHMARK(BM_PoissonMix)
    ->Arg(static_cast<int>(PolicyKind::kFixedGsl))
    ->Arg(static_cast<int>(PolicyKind::kDgsf))
    ->Arg(static_cast<int>(PolicyKind::kSage))
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace faassim
