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

#include "faassim/memory_ledger.h"

#include <stdexcept>
#include <utility>

namespace faassim {

std::string_view MemoryClassName(MemoryClass cls) {
  switch (cls) {
    case MemoryClass::kContext:
      return "context";
    case MemoryClass::kReadOnly:
      return "read_only";
    case MemoryClass::kWritable:
      return "writable";
    case MemoryClass::kInstanceFixed:
      return "instance";
  }
  return "unknown";
}

MemoryLedger::MemoryLedger(std::string name, std::optional<Megabytes> capacity, Megabytes granularity)
    : name_(std::move(name)), capacity_(capacity), granularity_(granularity) {
  if (granularity_.nano() <= 0) {
    throw std::invalid_argument("ledger " + name_ + ": granularity must be positive");
  }
  if (capacity_ && capacity_->nano() < 0) {
    throw std::invalid_argument("ledger " + name_ + ": capacity must be non-negative");
  }
}

Megabytes MemoryLedger::EffectiveSize(Megabytes requested) const {
  const std::int64_t g = granularity_.nano();
  const std::int64_t units = (requested.nano() + g - 1) / g;
  return Megabytes::FromNano(units * g);
}

AllocOutcome MemoryLedger::TryAlloc(Megabytes size, MemoryClass cls, std::uint64_t owner) {
  if (size.nano() <= 0) {
    throw std::invalid_argument("ledger " + name_ + ": allocation size must be positive");
  }
  const Megabytes effective = EffectiveSize(size);
  if (capacity_ && used_ + effective > *capacity_) {
    return AllocOutcome::Denied(used_ + effective - *capacity_);
  }
  const AllocationId id{next_id_++};
  allocations_.emplace(id, Allocation{size, effective, cls, owner});
  used_ += effective;
  used_by_class_[static_cast<std::size_t>(cls)] += effective;
  requested_by_class_[static_cast<std::size_t>(cls)] += size;
  if (listener_) listener_();
  return AllocOutcome::Granted(id, effective);
}

void MemoryLedger::Free(AllocationId id) {
  auto it = allocations_.find(id);
  if (it == allocations_.end()) {
    throw std::invalid_argument("ledger " + name_ + ": free of unknown allocation " +
                                std::to_string(id.value));
  }
  const Allocation& a = it->second;
  used_ -= a.effective;
  used_by_class_[static_cast<std::size_t>(a.cls)] -= a.effective;
  requested_by_class_[static_cast<std::size_t>(a.cls)] -= a.requested;
  allocations_.erase(it);
  if (listener_) listener_();
}

Megabytes MemoryLedger::Shortfall(std::span<const Megabytes> sizes) const {
  if (!capacity_) return {};
  Megabytes need = used_;
  for (Megabytes s : sizes) {
    if (s.nano() > 0) need += EffectiveSize(s);
  }
  return need > *capacity_ ? need - *capacity_ : Megabytes{};
}

bool MemoryLedger::Fits(std::span<const Megabytes> sizes) const {
  return Shortfall(sizes).is_zero();
}

const MemoryLedger::Allocation& MemoryLedger::Get(AllocationId id) const {
  auto it = allocations_.find(id);
  if (it == allocations_.end()) {
    throw std::invalid_argument("ledger " + name_ + ": unknown allocation " + std::to_string(id.value));
  }
  return it->second;
}

}  // namespace faassim
