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

#ifndef FAASSIM_ENGINE_H_
#define FAASSIM_ENGINE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "faassim/units.h"

namespace faassim {

// Raised on violations that indicate a bug in the model (the run is aborted).
class SimulationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class EventKind : std::uint8_t {
  kArrival,
  kTransferComplete,
  kStageComplete,
  kExitTimer,
  kGeneratorTick,
  kMeasurementTick,
};
inline constexpr std::size_t kEventKindCount = 6;

std::string_view EventKindName(EventKind kind);

struct EventHandle {
  std::uint64_t seq = 0;
  friend bool operator==(EventHandle, EventHandle) = default;
};

struct DispatchedEvent {
  SimTime time;
  std::uint64_t seq;
  EventKind kind;
};

// Single-threaded discrete-event core. Events dispatch in (time, seq) order;
// cancellation is lazy: a cancelled entry stays in the heap and is skipped.
class Engine {
 public:
  using Handler = std::function<void()>;
  using Observer = std::function<void(const DispatchedEvent&)>;

  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimTime Now() const { return now_; }

  EventHandle Schedule(SimTime at, EventKind kind, Handler handler);
  EventHandle ScheduleAfter(Duration delay, EventKind kind, Handler handler) {
    return Schedule(now_ + delay, kind, std::move(handler));
  }

  // True if the event was still pending; false if it already ran or was
  // cancelled. Throws std::invalid_argument for handles never issued.
  bool Cancel(EventHandle handle);

  bool IsPending(EventHandle handle) const { return live_.contains(handle.seq); }

  // Dispatches until the queue is exhausted.
  std::uint64_t Run();
  // Dispatches every live event with time <= until, then advances the clock
  // to `until`.
  std::uint64_t RunUntil(SimTime until);
  // Dispatches at most one live event. Returns false when none remain.
  bool Step();

  std::size_t PendingCount() const { return live_.size(); }
  std::size_t PendingCount(EventKind kind) const {
    return live_by_kind_[static_cast<std::size_t>(kind)];
  }
  std::uint64_t DispatchedCount() const { return dispatched_; }

  // Called after every dispatched handler returns.
  void SetObserver(Observer observer) { observer_ = std::move(observer); }

  void EnableLog(bool enabled) { log_enabled_ = enabled; }
  const std::vector<DispatchedEvent>& log() const { return log_; }

 private:
  struct Entry {
    SimTime time;
    std::uint64_t seq;
    EventKind kind;
    Handler handler;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::optional<Entry> PopLive(std::optional<SimTime> until);
  void Dispatch(Entry entry);

  SimTime now_ = kSimStart;
  std::uint64_t next_seq_ = 1;
  std::uint64_t dispatched_ = 0;
  std::vector<Entry> heap_;
  std::unordered_map<std::uint64_t, EventKind> live_;
  std::array<std::size_t, kEventKindCount> live_by_kind_{};
  Observer observer_;
  bool log_enabled_ = false;
  std::vector<DispatchedEvent> log_;
};

}  // namespace faassim

#endif  // FAASSIM_ENGINE_H_
