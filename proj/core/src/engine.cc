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

#include <algorithm>
#include <utility>

namespace faassim {

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kArrival:
      return "arrival";
    case EventKind::kTransferComplete:
      return "transfer_complete";
    case EventKind::kStageComplete:
      return "stage_complete";
    case EventKind::kExitTimer:
      return "exit_timer";
    case EventKind::kGeneratorTick:
      return "generator_tick";
    case EventKind::kMeasurementTick:
      return "measurement_tick";
  }
  return "unknown";
}

EventHandle Engine::Schedule(SimTime at, EventKind kind, Handler handler) {
  if (at < now_) {
    throw SimulationError("event scheduled in the past: t=" + std::to_string(ToMillis(at)) +
                          "ms < now=" + std::to_string(ToMillis(now_)) + "ms");
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push_back(Entry{at, seq, kind, std::move(handler)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  live_.emplace(seq, kind);
  ++live_by_kind_[static_cast<std::size_t>(kind)];
  return EventHandle{seq};
}

bool Engine::Cancel(EventHandle handle) {
  if (handle.seq == 0 || handle.seq >= next_seq_) {
    throw std::invalid_argument("unknown event handle " + std::to_string(handle.seq));
  }
  auto it = live_.find(handle.seq);
  if (it == live_.end()) return false;
  --live_by_kind_[static_cast<std::size_t>(it->second)];
  live_.erase(it);
  return true;
}

std::optional<Engine::Entry> Engine::PopLive(std::optional<SimTime> until) {
  while (!heap_.empty()) {
    const Entry& top = heap_.front();
    if (!live_.contains(top.seq)) {
      std::pop_heap(heap_.begin(), heap_.end(), Later{});
      heap_.pop_back();
      continue;
    }
    if (until && top.time > *until) return std::nullopt;
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry entry = std::move(heap_.back());
    heap_.pop_back();
    live_.erase(entry.seq);
    --live_by_kind_[static_cast<std::size_t>(entry.kind)];
    return entry;
  }
  return std::nullopt;
}

void Engine::Dispatch(Entry entry) {
  now_ = entry.time;
  ++dispatched_;
  const DispatchedEvent info{entry.time, entry.seq, entry.kind};
  if (log_enabled_) log_.push_back(info);
  entry.handler();
  if (observer_) observer_(info);
}

std::uint64_t Engine::Run() {
  std::uint64_t count = 0;
  while (auto entry = PopLive(std::nullopt)) {
    Dispatch(std::move(*entry));
    ++count;
  }
  return count;
}

std::uint64_t Engine::RunUntil(SimTime until) {
  std::uint64_t count = 0;
  while (auto entry = PopLive(until)) {
    Dispatch(std::move(*entry));
    ++count;
  }
  if (until > now_) now_ = until;
  return count;
}

bool Engine::Step() {
  auto entry = PopLive(std::nullopt);
  if (!entry) return false;
  Dispatch(std::move(*entry));
  return true;
}

}  // namespace faassim
