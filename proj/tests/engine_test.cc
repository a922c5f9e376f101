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

#include "faassim/engine.h"

#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace faassim {
namespace {

TEST(EngineTest, SameTimeEventsRunInScheduleOrder) {
  Engine e;
  std::vector<int> order;
  e.Schedule(kSimStart, EventKind::kArrival, [&] { order.push_back(1); });
  e.Schedule(kSimStart, EventKind::kArrival, [&] { order.push_back(2); });
  EXPECT_EQ(e.Run(), 2u);
  EXPECT_EQ(order, (std::vector<int>{1, 2}));
}

TEST(EngineTest, CancelledEventNeverRuns) {
  Engine e;
  bool ran = false;
  const EventHandle h = e.Schedule(AtMillis(5), EventKind::kArrival, [&] { ran = true; });
  EXPECT_TRUE(e.Cancel(h));
  EXPECT_EQ(e.Run(), 0u);
  EXPECT_FALSE(ran);
}

TEST(EngineTest, SchedulingInThePastThrows) {
  Engine e;
  e.Schedule(AtMillis(10), EventKind::kArrival, [] {});
  e.Run();
  EXPECT_THROW(e.Schedule(AtMillis(10) - Duration(1), EventKind::kArrival, [] {}), SimulationError);
}

TEST(EngineTest, CancelReportsWhetherEventWasPending) {
  Engine e;
  const EventHandle a = e.Schedule(AtMillis(1), EventKind::kArrival, [] {});
  const EventHandle b = e.Schedule(AtMillis(2), EventKind::kArrival, [] {});
  EXPECT_TRUE(e.Cancel(a));
  EXPECT_FALSE(e.Cancel(a));
  e.Run();
  EXPECT_FALSE(e.Cancel(b));
  EXPECT_THROW(e.Cancel(EventHandle{12345}), std::invalid_argument);
}

TEST(EngineTest, EmptyRunDispatchesNothing) {
  Engine e;
  EXPECT_EQ(e.Run(), 0u);
  EXPECT_FALSE(e.Step());
}

TEST(EngineTest, DispatchOrderIsTimeThenSequence) {
  Engine e;
  std::vector<std::uint64_t> seqs;
  e.SetObserver([&](const DispatchedEvent& d) { seqs.push_back(d.seq); });
  const EventHandle late_a = e.Schedule(AtMillis(2), EventKind::kArrival, [] {});
  const EventHandle early = e.Schedule(AtMillis(1), EventKind::kArrival, [] {});
  const EventHandle late_b = e.Schedule(AtMillis(2), EventKind::kArrival, [] {});
  e.Run();
  EXPECT_EQ(seqs, (std::vector<std::uint64_t>{early.seq, late_a.seq, late_b.seq}));
}

TEST(EngineTest, RunUntilStopsAtBoundaryAndAdvancesClock) {
  Engine e;
  e.Schedule(AtMillis(1), EventKind::kArrival, [] {});
  e.Schedule(AtMillis(2), EventKind::kArrival, [] {});
  EXPECT_EQ(e.RunUntil(AtMillis(1)), 1u);
  EXPECT_EQ(e.Now(), AtMillis(1));
  EXPECT_EQ(e.PendingCount(), 1u);
  EXPECT_EQ(e.RunUntil(AtMillis(1.5)), 0u);
  EXPECT_EQ(e.Now(), AtMillis(1.5));
}

TEST(EngineTest, PendingCountsByKindIgnoreCancelled) {
  Engine e;
  const EventHandle h = e.Schedule(AtMillis(1), EventKind::kExitTimer, [] {});
  e.Schedule(AtMillis(1), EventKind::kArrival, [] {});
  EXPECT_EQ(e.PendingCount(EventKind::kExitTimer), 1u);
  e.Cancel(h);
  EXPECT_EQ(e.PendingCount(EventKind::kExitTimer), 0u);
  EXPECT_EQ(e.PendingCount(), 1u);
}

// Random schedules, including handlers that schedule more events and cancel
// others: the dispatch sequence must be a stable sort by (time, seq) and the
// clock must never go back.
TEST(EngineTest, RandomScheduleDispatchesInStableOrder) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    Engine e;
    e.EnableLog(true);
    std::vector<EventHandle> handles;
    SimTime last = kSimStart;
    bool monotone = true;
    e.SetObserver([&](const DispatchedEvent& d) {
      monotone = monotone && d.time >= last;
      last = d.time;
    });
    for (int i = 0; i < 200; ++i) {
      const SimTime at = kSimStart + Duration(static_cast<std::int64_t>(rng() % 50));
      handles.push_back(e.Schedule(at, EventKind::kArrival, [&e, &rng] {
        if (rng() % 4 == 0) e.ScheduleAfter(Duration(static_cast<std::int64_t>(rng() % 5)), EventKind::kArrival, [] {});
      }));
    }
    for (int i = 0; i < 40; ++i) e.Cancel(handles[rng() % handles.size()]);
    e.Run();
    ASSERT_TRUE(monotone);
    const auto& log = e.log();
    for (std::size_t i = 1; i < log.size(); ++i) {
      ASSERT_TRUE(log[i - 1].time < log[i].time || (log[i - 1].time == log[i].time && log[i - 1].seq < log[i].seq));
    }
  }
}

}  // namespace
}  // namespace faassim
