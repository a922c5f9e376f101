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

#include "faassim/engine.h"

namespace faassim {
namespace {

void BM_ScheduleAndRun(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    Engine e;
    std::int64_t fired = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      e.Schedule(AtMillis(static_cast<double>((i * 7919) % 1000)), EventKind::kArrival, [&] { ++fired; });
    }
    e.Run();
    benchmark::DoNotOptimize(fired);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_ScheduleAndRun)->Arg(1 << 10)->Arg(1 << 16);

void BM_CancelHalf(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    Engine e;
    std::vector<EventHandle> handles;
    for (std::int64_t i = 0; i < n; ++i) handles.push_back(e.Schedule(AtMillis(static_cast<double>(i)), EventKind::kExitTimer, [] {}));
    for (std::size_t i = 0; i < handles.size(); i += 2) e.Cancel(handles[i]);
    e.Run();
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_CancelHalf)->Arg(1 << 14);

}  // namespace
}  // namespace faassim
