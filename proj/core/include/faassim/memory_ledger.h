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

#ifndef FAASSIM_MEMORY_LEDGER_H_
#define FAASSIM_MEMORY_LEDGER_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "faassim/units.h"

namespace faassim {

enum class MemoryClass : std::uint8_t { kContext, kReadOnly, kWritable, kInstanceFixed };
inline constexpr std::size_t kMemoryClassCount = 4;

std::string_view MemoryClassName(MemoryClass cls);

struct AllocationId {
  std::uint64_t value = 0;
  friend auto operator<=>(AllocationId, AllocationId) = default;
};

// Result of TryAlloc: either an allocation or the shortfall that blocked it.
class AllocOutcome {
 public:
  static AllocOutcome Granted(AllocationId id, Megabytes size) { return AllocOutcome(id, size, {}); }
  static AllocOutcome Denied(Megabytes shortfall) { return AllocOutcome(std::nullopt, {}, shortfall); }

  explicit operator bool() const { return id_.has_value(); }
  AllocationId id() const { return id_.value(); }
  Megabytes effective_size() const { return effective_; }
  Megabytes shortfall() const { return shortfall_; }

 private:
  AllocOutcome(std::optional<AllocationId> id, Megabytes eff, Megabytes shortfall)
      : id_(id), effective_(eff), shortfall_(shortfall) {}
  std::optional<AllocationId> id_;
  Megabytes effective_;
  Megabytes shortfall_;
};

// Capacity ledger for one memory pool. Every request is charged at its size
// rounded up to the ledger's allocation granularity.
class MemoryLedger {
 public:
  struct Allocation {
    Megabytes requested;
    Megabytes effective;
    MemoryClass cls;
    std::uint64_t owner;
  };

  // Granularity of one fixed-point unit means exact accounting. A missing
  // capacity means unlimited.
  MemoryLedger(std::string name, std::optional<Megabytes> capacity, Megabytes granularity);

  static Megabytes ExactGranularity() { return Megabytes::FromNano(1); }

  Megabytes EffectiveSize(Megabytes requested) const;

  // Throws std::invalid_argument when size is not positive.
  AllocOutcome TryAlloc(Megabytes size, MemoryClass cls, std::uint64_t owner);
  // Throws std::invalid_argument for unknown or already freed ids.
  void Free(AllocationId id);

  // Whether all of `sizes` (requested, pre-rounding) fit at once.
  bool Fits(std::span<const Megabytes> sizes) const;
  Megabytes Shortfall(std::span<const Megabytes> sizes) const;

  bool Contains(AllocationId id) const { return allocations_.contains(id); }
  const Allocation& Get(AllocationId id) const;

  const std::string& name() const { return name_; }
  std::optional<Megabytes> capacity() const { return capacity_; }
  Megabytes granularity() const { return granularity_; }
  Megabytes used() const { return used_; }
  Megabytes used(MemoryClass cls) const { return used_by_class_[static_cast<std::size_t>(cls)]; }
  Megabytes requested(MemoryClass cls) const {
    return requested_by_class_[static_cast<std::size_t>(cls)];
  }
  std::size_t allocation_count() const { return allocations_.size(); }
  const std::map<AllocationId, Allocation>& allocations() const { return allocations_; }

  // Invoked after every successful allocation and every free.
  void SetChangeListener(std::function<void()> listener) { listener_ = std::move(listener); }

 private:
  std::string name_;
  std::optional<Megabytes> capacity_;
  Megabytes granularity_;
  Megabytes used_;
  std::array<Megabytes, kMemoryClassCount> used_by_class_{};
  std::array<Megabytes, kMemoryClassCount> requested_by_class_{};
  std::map<AllocationId, Allocation> allocations_;
  std::uint64_t next_id_ = 1;
  std::function<void()> listener_;
};

}  // namespace faassim

#endif  // FAASSIM_MEMORY_LEDGER_H_
