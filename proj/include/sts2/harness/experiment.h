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


// Experiment description: who controls each player, how the learner is
// rewarded and trained, and the curriculum it follows. Experiment files are
// JSON objects; every key is optional except where noted and unknown keys
// are rejected.

#ifndef STS2_HARNESS_EXPERIMENT_H_
#define STS2_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sts2/game.h"
#include "sts2/harness/checkpoint.h"
#include "sts2/rewards.h"
#include "sts2/rl/dqn.h"
#include "sts2/rl/ppo.h"
#include "sts2/scripted_ai.h"
#include "sts2/serialize.h"

namespace sts2::harness {

enum class SlotKind : std::uint8_t { kScripted, kLearner, kFrozen, kHuman };
std::string_view SlotKindName(SlotKind kind);

struct SlotSpec {
  SlotKind kind = SlotKind::kScripted;
  ScriptedProfile profile;  // kScripted
  std::string agent;        // kLearner: agent id
  std::string checkpoint;   // kFrozen: checkpoint path

  static SlotSpec Scripted(ScriptedProfile p = {}) {
    return {SlotKind::kScripted, p, {}, {}};
  }
  static SlotSpec Learner(std::string agent = "learner") {
    return {SlotKind::kLearner, {}, std::move(agent), {}};
  }
  static SlotSpec Frozen(std::string path) {
    return {SlotKind::kFrozen, {}, {}, std::move(path)};
  }
  static SlotSpec Human() { return {SlotKind::kHuman, {}, {}, {}}; }
  bool operator==(const SlotSpec&) const = default;
};

// One entry per player, indexed by PlayerId::Slot(k).
using SlotAssignment = std::vector<SlotSpec>;

// Throws ConfigError unless there is exactly one entry per player, profiles
// are valid and (unless allowed) no slot is Human.
void ValidateSlots(const GameConfig& game, const SlotAssignment& slots,
                   bool allow_human);

std::vector<PlayerId> LearnerSlots(const SlotAssignment& slots, int k);

struct AdvanceRule {
  enum class Kind : std::uint8_t { kSteps, kEvalScoreRateAtLeast };
  Kind kind = Kind::kSteps;
  std::uint64_t steps = 0;  // env steps spent in the stage
  double score_rate = 0.0;  // learner team's eval score rate, percent

  bool operator==(const AdvanceRule&) const = default;
};

struct CurriculumStage {
  std::string name;
  Json game_overrides = Json::object();  // GameConfig keys
  std::optional<Difficulty> opponent_difficulty;
  std::optional<AdvanceRule> advance_when;  // none on the last stage

  bool operator==(const CurriculumStage&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  GameConfig game;
  SlotAssignment slots;
  RewardSpec reward;
  Algo algo = Algo::kDqn;
  rl::DqnConfig dqn;
  rl::PpoConfig ppo;
  bool centralized = false;
  std::vector<CurriculumStage> curriculum;
  std::uint64_t budget = 1000000;    // learner env steps
  std::uint64_t eval_every = 100000;  // env steps, 0 disables periodic eval
  int eval_episodes = 50;
  int final_eval_episodes = 500;
  std::uint64_t seed = 1;

  // Throws ConfigError.
  void Validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

Json ExperimentToJson(const ExperimentConfig& config);
// Fields absent from `j` keep their defaults. Throws ConfigError.
ExperimentConfig ExperimentFromJson(const Json& j);
ExperimentConfig LoadExperiment(const std::string& path);

// FNV-1a of the canonical JSON dump.
std::uint64_t ExperimentHash(const ExperimentConfig& config);

// Game config with the stage's overrides applied.
GameConfig StageGame(const ExperimentConfig& config, int stage);
SlotAssignment StageSlots(const ExperimentConfig& config, int stage);

Json ProfileToJson(const ScriptedProfile& p);
void ProfileFromJson(const Json& j, ScriptedProfile& p);
Json RewardToJson(const RewardSpec& r);
RewardSpec RewardFromJson(const Json& j);
Json DqnToJson(const rl::DqnConfig& c);
void DqnFromJson(const Json& j, rl::DqnConfig& c);
Json PpoToJson(const rl::PpoConfig& c);
void PpoFromJson(const Json& j, rl::PpoConfig& c);
Json SlotsToJson(const SlotAssignment& slots, int k);
SlotAssignment SlotsFromJson(const Json& j, int k);

}  // namespace sts2::harness

#endif  // STS2_HARNESS_EXPERIMENT_H_
