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

#ifndef FAASSIM_UNITS_H_
#define FAASSIM_UNITS_H_

#include <chrono>
#include <cmath>
#include <compare>
#include <cstdint>

namespace faassim {

// Simulated time is an integer count of microseconds since simulation start.
using Duration = std::chrono::microseconds;

struct SimClock {
  using duration = Duration;
  using rep = duration::rep;
  using period = duration::period;
  using time_point = std::chrono::time_point<SimClock, duration>;
  static constexpr bool is_steady = true;
};

using SimTime = SimClock::time_point;

inline constexpr SimTime kSimStart{};

inline Duration Millis(double ms) { return Duration(std::llround(ms * 1000.0)); }
inline Duration Seconds(double s) { return Duration(std::llround(s * 1e6)); }
inline SimTime AtMillis(double ms) { return kSimStart + Millis(ms); }

inline double ToMillis(Duration d) { return static_cast<double>(d.count()) / 1000.0; }
inline double ToMillis(SimTime t) { return ToMillis(t - kSimStart); }
inline double ToSeconds(Duration d) { return static_cast<double>(d.count()) / 1e6; }
inline double ToSeconds(SimTime t) { return ToSeconds(t - kSimStart); }

// Data and memory quantities in fixed point: one unit is 1e-9 MB.
class Megabytes {
 public:
  static constexpr std::int64_t kNanoPerMb = 1'000'000'000;

  constexpr Megabytes() = default;

  static Megabytes FromMb(double mb) {
    return Megabytes(std::llround(mb * static_cast<double>(kNanoPerMb)));
  }
  static constexpr Megabytes FromNano(std::int64_t nano) { return Megabytes(nano); }

  constexpr std::int64_t nano() const { return nano_; }
  double mb() const { return static_cast<double>(nano_) / static_cast<double>(kNanoPerMb); }

  constexpr bool is_zero() const { return nano_ == 0; }

  constexpr Megabytes& operator+=(Megabytes o) {
    nano_ += o.nano_;
    return *this;
  }
  constexpr Megabytes& operator-=(Megabytes o) {
    nano_ -= o.nano_;
    return *this;
  }
  friend constexpr Megabytes operator+(Megabytes a, Megabytes b) { return a += b; }
  friend constexpr Megabytes operator-(Megabytes a, Megabytes b) { return a -= b; }
  friend constexpr Megabytes operator*(Megabytes a, std::int64_t k) { return Megabytes(a.nano_ * k); }
  friend constexpr Megabytes operator*(std::int64_t k, Megabytes a) { return a * k; }
  friend constexpr auto operator<=>(Megabytes, Megabytes) = default;

 private:
  constexpr explicit Megabytes(std::int64_t nano) : nano_(nano) {}
  std::int64_t nano_ = 0;
};

// Channel bandwidth. 1 MB/s moves exactly 1000 fixed-point units per microsecond.
class Bandwidth {
 public:
  constexpr Bandwidth() = default;

  static Bandwidth FromMbps(double mbps) { return Bandwidth(std::llround(mbps * 1000.0)); }

  constexpr std::int64_t nano_mb_per_us() const { return rate_; }
  double mbps() const { return static_cast<double>(rate_) / 1000.0; }

  friend constexpr auto operator<=>(Bandwidth, Bandwidth) = default;

 private:
  constexpr explicit Bandwidth(std::int64_t rate) : rate_(rate) {}
  std::int64_t rate_ = 0;
};

// Time to move `bytes` alone on a channel, rounded up to the clock tick.
inline Duration SoloTransferTime(Megabytes bytes, Bandwidth bw) {
  const std::int64_t rate = bw.nano_mb_per_us();
  return Duration((bytes.nano() + rate - 1) / rate);
}

}  // namespace faassim

#endif  // FAASSIM_UNITS_H_
