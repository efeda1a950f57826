// Copyright 2026 The STS2 Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance criteria P1-P11 as runnable checks. P1-P6 and P11 are exact
// property suites (also exposed as `sts2 selfcheck`); P7-P10 train presets.

#ifndef STS2_CHECKS_ACCEPTANCE_H_
#define STS2_CHECKS_ACCEPTANCE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sts2/harness/preset.h"

namespace sts2::checks {

struct CheckResult {
  std::string id;     // "P1" ...
  std::string title;
  bool passed = false;
  std::string detail;  // measured values against the threshold
  double seconds = 0.0;
};

// "PASS P1 Determinism: <detail> (0.8 s)".
std::string FormatResult(const CheckResult& r);

CheckResult CheckDeterminism(std::uint64_t seed);                        // P1
CheckResult CheckGradients(std::uint64_t seed);                          // P2
CheckResult CheckRewardAccounting(std::uint64_t seed);                   // P3
CheckResult CheckScriptedQuirk(std::uint64_t seed);                      // P4
CheckResult CheckStatsOracle(const std::string& work_dir,
                             std::uint64_t seed);                        // P5
CheckResult CheckThroughput(double seconds);                             // P6
CheckResult CheckEvalScoreRate(const harness::PresetResult& t2);         // P7
CheckResult CheckShapingBeatsSparse(const harness::PresetResult& t2,
                                    const harness::PresetResult& t1);    // P8
CheckResult CheckPpoLocalMinimum(const harness::PresetResult& run);      // P9
CheckResult CheckJointAction(const harness::PresetResult& run,
                             const std::string& run_dir);                // P10
CheckResult CheckCheckpointRoundTrip(const std::string& work_dir,
                                     std::uint64_t seed);                // P11

using ResultCallback = std::function<void(const CheckResult&)>;

// The exact suites: P1-P6 and P11.
std::vector<CheckResult> RunSelfcheck(const std::string& work_dir,
                                      std::uint64_t seed,
                                      const ResultCallback& on_result = {},
                                      double throughput_seconds = 10.0);

struct AcceptanceOptions {
  std::string work_dir;
  std::uint64_t seed = 1;
  bool training = true;  // false skips P7-P10
  double throughput_seconds = 10.0;
  // Training budget for the joint-action smoke run.
  std::uint64_t central_budget = 200000;
  std::function<void(const std::string&)> progress;
};

std::vector<CheckResult> RunAcceptance(const AcceptanceOptions& options,
                                       const ResultCallback& on_result = {});

}  // namespace sts2::checks

#endif  // STS2_CHECKS_ACCEPTANCE_H_
