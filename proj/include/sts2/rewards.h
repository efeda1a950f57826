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

#ifndef STS2_REWARDS_H_
#define STS2_REWARDS_H_

#include <map>
#include <span>
#include <string_view>

#include "sts2/game.h"

namespace sts2 {

enum class PossessionScope : std::uint8_t { kIndividual, kTeam };

// Event-to-reward mapping for one learner. Rewards are linear in events, so
// specs with the same scope and pass handling can be added.
struct RewardSpec {
  double score_reward = 1.0;
  double concede_reward = -1.0;
  double possession_gain = 0.0;
  double possession_loss = 0.0;
  PossessionScope possession_scope = PossessionScope::kIndividual;
  double teammate_loss_penalty = 0.0;
  bool exclude_within_team_passes = true;
  // Loose-ball pickups (including kick-offs) count as gains.
  bool reward_loose_pickups = true;

  void Validate() const;
  RewardSpec operator+(const RewardSpec& other) const;
  bool operator==(const RewardSpec&) const = default;
};

enum class RewardPreset : std::uint8_t {
  kSparse,
  kIndividualPossession,
  kTeamPossession,
  kTeammateAssist,
  kCentralizedTeam,
};

RewardSpec MakeRewardSpec(RewardPreset preset);
std::string_view RewardPresetName(RewardPreset preset);
std::optional<RewardPreset> ParseRewardPreset(std::string_view s);

// Per-learner reward for the events of one tick. Throws ArgumentError when
// `learners` is empty or the events span more than one tick.
std::map<PlayerId, double> ComputeRewards(std::span<const GameEvent> events,
                                          std::span<const PlayerId> learners,
                                          const RewardSpec& spec);

// Single-learner form used by the training loop.
double RewardFor(std::span<const GameEvent> events, PlayerId learner,
                 const RewardSpec& spec);

}  // namespace sts2

#endif  // STS2_REWARDS_H_
