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

#include "faassim/channel.h"

namespace faassim {
namespace {

// Rounds of `concurrency` simultaneous transfers; each round drains before
// the next starts.
void BM_ChannelChurn(benchmark::State& state) {
  const auto concurrency = static_cast<int>(state.range(0));
  constexpr int kTransfers = 2048;
  const double round_ms = 21.0 * concurrency;  // 101 MB at 5051 MB/s is 20 ms solo
  for (auto _ : state) {
    Engine e;
    Channel ch(e, "bench", Bandwidth::FromMbps(5051));
    int done = 0;
    for (int i = 0; i < kTransfers; ++i) {
      e.Schedule(AtMillis(round_ms * (i / concurrency)), EventKind::kArrival,
                 [&] { ch.BeginTransfer(Megabytes::FromMb(101), 0, [&](TransferId) { ++done; }); });
    }
    e.Run();
    benchmark::DoNotOptimize(done);
  }
  state.SetItemsProcessed(state.iterations() * kTransfers);
}
BENCHMARK(BM_ChannelChurn)->Arg(1)->Arg(8)->Arg(64);

}  // namespace
}  // namespace faassim
