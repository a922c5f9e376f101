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

#include "support/fluid_oracle.h"

#include <algorithm>
#include <cstddef>
#include <limits>

namespace faassim::testing {

std::vector<double> SteppedFluidCompletions(const std::vector<OracleTransfer>& transfers, double bandwidth_mbps,
                                            double step_ms) {
  const double per_ms = bandwidth_mbps / 1000.0;
  std::vector<double> remaining(transfers.size());
  std::vector<double> done(transfers.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < transfers.size(); ++i) remaining[i] = transfers[i].mb;

  std::size_t left = transfers.size();
  for (long step = 0; left > 0; ++step) {
    const double t = static_cast<double>(step) * step_ms;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < transfers.size(); ++i) {
      if (remaining[i] > 0 && transfers[i].start_ms <= t) active.push_back(i);
    }
    if (active.empty()) continue;
    // Within the step, capacity freed by a finishing transfer goes to the rest.
    double tau = 0;
    while (!active.empty() && tau < step_ms) {
      const double rate = per_ms / static_cast<double>(active.size());
      double first = std::numeric_limits<double>::infinity();
      for (std::size_t i : active) first = std::min(first, remaining[i] / rate);
      const double dt = std::min(first, step_ms - tau);
      std::vector<std::size_t> still;
      for (std::size_t i : active) {
        remaining[i] -= rate * dt;
        if (remaining[i] <= 1e-12 * transfers[i].mb) {
          done[i] = t + tau + dt;
          remaining[i] = 0;
          --left;
        } else {
          still.push_back(i);
        }
      }
      active.swap(still);
      tau += dt;
    }
  }
  return done;
}

}  // namespace faassim::testing
