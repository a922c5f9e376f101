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

#include "faassim/channel.h"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace faassim {

namespace {
// Products of bandwidth, time and membership can exceed 64 bits.
__extension__ using Wide = __int128;
}  // namespace

Channel::Channel(Engine& engine, std::string name, Bandwidth bandwidth)
    : engine_(engine), name_(std::move(name)), bandwidth_(bandwidth) {
  if (bandwidth_.nano_mb_per_us() <= 0) {
    throw std::invalid_argument("channel " + name_ + ": bandwidth must be positive");
  }
}

TransferId Channel::BeginTransfer(Megabytes bytes, std::uint64_t owner, CompletionFn on_complete) {
  if (bytes.nano() <= 0) {
    throw std::invalid_argument("channel " + name_ + ": transfer size must be positive");
  }
  Settle();
  const TransferId id{next_id_++};
  active_.emplace(id, Transfer{owner, bytes, bytes, kSimStart, std::move(on_complete)});
  ++stats_.transfers_started;
  stats_.peak_active = std::max(stats_.peak_active, active_.size());
  Reschedule();
  return id;
}

Megabytes Channel::Remaining(TransferId id) {
  Settle();
  auto it = active_.find(id);
  return it == active_.end() ? Megabytes{} : it->second.remaining;
}

SimTime Channel::CompletionTime(TransferId id) const {
  auto it = active_.find(id);
  if (it == active_.end()) throw std::invalid_argument("channel " + name_ + ": unknown transfer");
  return it->second.completes_at;
}

const Channel::Stats& Channel::stats() {
  Settle();
  return stats_;
}

void Channel::Settle() {
  const SimTime now = engine_.Now();
  const Duration elapsed = now - last_update_;
  last_update_ = now;
  if (active_.empty() || elapsed.count() <= 0) return;

  stats_.busy_time += elapsed;
  const auto n = static_cast<Wide>(active_.size());
  const Wide total = static_cast<Wide>(bandwidth_.nano_mb_per_us()) * elapsed.count();
  const Wide share = total / n;
  Wide extra = total % n;
  // The indivisible remainder goes one unit at a time to the oldest transfers
  // so the channel delivers exactly bandwidth * elapsed.
  for (auto& [id, t] : active_) {
    Wide grant = share;
    if (extra > 0) {
      ++grant;
      --extra;
    }
    const auto given = static_cast<std::int64_t>(std::min<Wide>(grant, t.remaining.nano()));
    t.remaining -= Megabytes::FromNano(given);
    stats_.delivered += Megabytes::FromNano(given);
  }
}

void Channel::Reschedule() {
  if (next_completion_) {
    engine_.Cancel(*next_completion_);
    next_completion_.reset();
  }
  if (active_.empty()) return;
  const SimTime now = engine_.Now();
  const auto n = static_cast<Wide>(active_.size());
  const Wide rate = bandwidth_.nano_mb_per_us();
  auto first = active_.end();
  for (auto it = active_.begin(); it != active_.end(); ++it) {
    Transfer& t = it->second;
    const Wide work = static_cast<Wide>(t.remaining.nano()) * n;
    t.completes_at = now + Duration(static_cast<std::int64_t>((work + rate - 1) / rate));
    if (first == active_.end() || t.completes_at < first->second.completes_at) first = it;
  }
  const TransferId tid = first->first;
  next_completion_ = engine_.Schedule(first->second.completes_at, EventKind::kTransferComplete, [this, tid] {
    next_completion_.reset();
    OnCompletionEvent(tid);
  });
}

void Channel::OnCompletionEvent(TransferId id) {
  Settle();
  // Integer division can leave each transfer short by less than one unit per
  // settle; a transfer whose completion time has come is finished.
  const std::int64_t slack = static_cast<std::int64_t>(active_.size());
  std::vector<std::pair<TransferId, CompletionFn>> finished;
  for (auto it = active_.begin(); it != active_.end();) {
    Transfer& t = it->second;
    const bool due = it->first == id || t.remaining.nano() <= slack;
    if (!due) {
      ++it;
      continue;
    }
    if (it->first == id && t.remaining.nano() > slack) {
      throw SimulationError("channel " + name_ + ": completion fired with " +
                            std::to_string(t.remaining.mb()) + " MB outstanding");
    }
    stats_.delivered += t.remaining;
    finished.emplace_back(it->first, std::move(t.on_complete));
    it = active_.erase(it);
  }
  stats_.transfers_completed += finished.size();
  Reschedule();
  for (auto& [tid, done] : finished) {
    if (done) done(tid);
  }
}

}  // namespace faassim
