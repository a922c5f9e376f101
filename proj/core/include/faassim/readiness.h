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

#ifndef FAASSIM_READINESS_H_
#define FAASSIM_READINESS_H_

#include <functional>
#include <utility>
#include <vector>

namespace faassim {

// One-shot readiness signal for state shared between invocations (a GPU
// context being created, read-only data being loaded).
class ReadinessToken {
 public:
  explicit ReadinessToken(bool ready = false) : ready_(ready) {}

  bool ready() const { return ready_; }

  void OnReady(std::function<void()> fn) {
    if (ready_) {
      fn();
    } else {
      waiters_.push_back(std::move(fn));
    }
  }

  void Signal() {
    if (ready_) return;
    ready_ = true;
    auto waiters = std::move(waiters_);
    waiters_.clear();
    for (auto& fn : waiters) fn();
  }

  std::size_t waiter_count() const { return waiters_.size(); }

 private:
  bool ready_;
  std::vector<std::function<void()>> waiters_;
};

}  // namespace faassim

#endif  // FAASSIM_READINESS_H_
