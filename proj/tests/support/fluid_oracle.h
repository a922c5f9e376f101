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

#ifndef FAASSIM_TESTS_SUPPORT_FLUID_ORACLE_H_
#define FAASSIM_TESTS_SUPPORT_FLUID_ORACLE_H_

#include <vector>

namespace faassim::testing {

struct OracleTransfer {
  double start_ms = 0;
  double mb = 0;
};

// Time-stepped equal-share reference: advances in `step_ms` increments and
// admits new transfers only at step boundaries. Inside a step the bandwidth
// is split evenly among active transfers, and a transfer that finishes early
// hands its share to the others for the rest of the step. Returns completion
// times in ms, indexed like `transfers`.
std::vector<double> SteppedFluidCompletions(const std::vector<OracleTransfer>& transfers, double bandwidth_mbps,
                                            double step_ms = 1.0);

}  // namespace faassim::testing

#endif  // FAASSIM_TESTS_SUPPORT_FLUID_ORACLE_H_
