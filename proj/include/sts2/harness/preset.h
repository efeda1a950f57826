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


// Named experiments: each materializes a documented ExperimentConfig, and
// RunPreset trains it (training its prerequisites first) or, for the
// cross-play preset, pits two trained teams against each other.

#ifndef STS2_HARNESS_PRESET_H_
#define STS2_HARNESS_PRESET_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sts2/harness/evaluate.h"
#include "sts2/harness/experiment.h"
#include "sts2/harness/train.h"

namespace sts2::harness {

struct PresetOptions {
  std::optional<std::uint64_t> budget;  // overrides every training run
  std::optional<int> final_eval_episodes;
  std::optional<int> eval_episodes;
  std::optional<std::uint64_t> eval_every;
  std::uint64_t seed = 1;
  // Prerequisite preset name -> final checkpoint path. Missing entries
  // default to <dir>/<name>/final.ckpt where <dir> is RunPreset's out_dir.
  std::map<std::string, std::string> checkpoints;
};

// Public presets, in documentation order.
const std::vector<std::string>& PresetNames();
// One line describing the preset; throws ConfigError for an unknown name.
std::string PresetDescription(const std::string& name);
// Presets whose final checkpoints this one loads, in training order.
std::vector<std::string> PresetDependencies(const std::string& name);
// Throws ConfigError for an unknown name or for EXP-CROSS, which has no
// single training run.
ExperimentConfig PresetExperiment(const std::string& name,
                                  const PresetOptions& options = {},
                                  const std::string& dir = ".");

struct PresetRun {
  std::string name;
  TrainResult result;
};

struct PresetResult {
  std::vector<PresetRun> runs;  // prerequisites first, the preset last
  MatchStats stats;             // final evaluation or cross-play result
  std::string table;
};

// Trains into <out_dir>/<preset>/ for the preset and each prerequisite.
// Prerequisites whose final.ckpt already exists (or is given in options)
// are reused instead of retrained.
PresetResult RunPreset(const std::string& name, const std::string& out_dir,
                       const PresetOptions& options = {},
                       const std::function<void(const std::string&)>& progress = {});

}  // namespace sts2::harness

#endif  // STS2_HARNESS_PRESET_H_
