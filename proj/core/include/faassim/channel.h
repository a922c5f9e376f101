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

#ifndef FAASSIM_CHANNEL_H_
#define FAASSIM_CHANNEL_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "faassim/engine.h"
#include "faassim/units.h"

namespace faassim {

struct TransferId {
  std::uint64_t value = 0;
  friend auto operator<=>(TransferId, TransferId) = default;
};

// A contended transfer medium under equal-share fluid processor sharing:
// with n active transfers each progresses at bandwidth / n.
//
// Progress is kept in fixed point. On every membership change the channel
// settles the bytes delivered since the last change and re-projects every
// completion time under the new share. Only the earliest completion has a
// pending engine event.
class Channel {
 public:
  using CompletionFn = std::function<void(TransferId)>;

  struct Stats {
    Megabytes delivered;
    Duration busy_time{};
    std::uint64_t transfers_started = 0;
    std::uint64_t transfers_completed = 0;
    std::size_t peak_active = 0;
  };

  Channel(Engine& engine, std::string name, Bandwidth bandwidth);
  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;

  // Throws std::invalid_argument when bytes is not positive.
  TransferId BeginTransfer(Megabytes bytes, std::uint64_t owner, CompletionFn on_complete);

  const std::string& name() const { return name_; }
  Bandwidth bandwidth() const { return bandwidth_; }
  std::size_t active_count() const { return active_.size(); }

  // Bytes still to move, settled to Now(). Zero for finished transfers.
  Megabytes Remaining(TransferId id);
  SimTime CompletionTime(TransferId id) const;

  // Settles progress to Now() before reporting.
  const Stats& stats();

 private:
  struct Transfer {
    std::uint64_t owner = 0;
    Megabytes total;
    Megabytes remaining;
    SimTime completes_at;
    CompletionFn on_complete;
  };

  void Settle();
  void Reschedule();
  void OnCompletionEvent(TransferId id);

  Engine& engine_;
  std::string name_;
  Bandwidth bandwidth_;
  std::map<TransferId, Transfer> active_;
  std::optional<EventHandle> next_completion_;
  SimTime last_update_ = kSimStart;
  std::uint64_t next_id_ = 1;
  Stats stats_;
};

}  // namespace faassim

#endif  // FAASSIM_CHANNEL_H_
