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


// Training loop: runs episodes to the step budget, lets scripted / frozen
// slots act through a Lineup and the learner through its agent, converts
// events to rewards, follows the curriculum, evaluates periodically and
// writes metrics and checkpoints.

#ifndef STS2_HARNESS_TRAIN_H_
#define STS2_HARNESS_TRAIN_H_

#include <functional>
#include <string>
#include <vector>

#include "sts2/harness/checkpoint.h"
#include "sts2/harness/evaluate.h"
#include "sts2/harness/experiment.h"

namespace sts2::harness {

struct TrainOptions {
  // When set, receives experiment.json, metrics.ndjson, step_<n>.ckpt at
  // every evaluation and final.ckpt.
  std::string out_dir;
  // Progress lines; not part of the deterministic output.
  std::function<void(const std::string&)> progress;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<std::string> metrics;  // one JSON record per line
  MatchStats final_eval;             // empty when final_eval_episodes == 0
  int final_stage = 0;
  std::uint64_t episodes = 0;
};

// Throws ConfigError for an invalid experiment and CheckpointError /
// ConfigError when a frozen slot cannot be resolved.
TrainResult Train(const ExperimentConfig& config,
                  const TrainOptions& options = {});

// Percent of all goals scored by `team` in `stats`.
double LearnerScoreRate(const MatchStats& stats, TeamId team);

}  // namespace sts2::harness

#endif  // STS2_HARNESS_TRAIN_H_
