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

#include "sts2/rewards.h"

#include <cmath>

namespace sts2 {
namespace {

bool RewardBearing(ChangeTag tag, const RewardSpec& spec) {
  switch (tag) {
    case ChangeTag::kOpponentTeam:
      return true;
    case ChangeTag::kLoose:
      return spec.reward_loose_pickups;
    case ChangeTag::kOwnTeamPass:
      return !spec.exclude_within_team_passes;
  }
  return false;
}

// Whether a possession change by `subject` credits `learner` under the scope.
bool InScope(PlayerId subject, PlayerId learner, const RewardSpec& spec) {
  if (spec.possession_scope == PossessionScope::kTeam) {
    return subject.team == learner.team;
  }
  return subject == learner;
}

double EventReward(const GameEvent& e, PlayerId learner,
                   const RewardSpec& spec) {
  switch (e.kind) {
    case EventKind::kGoal:
      return e.player.team == learner.team ? spec.score_reward
                                           : spec.concede_reward;
    case EventKind::kPossessionGained:
      if (RewardBearing(e.tag, spec) && InScope(e.player, learner, spec)) {
        return spec.possession_gain;
      }
      return 0.0;
    case EventKind::kPossessionLost: {
      double r = 0.0;
      if (RewardBearing(e.tag, spec) && InScope(e.player, learner, spec)) {
        r += spec.possession_loss;
      }
      // A teammate's turnover costs the learner; a teammate's gain earns
      // nothing.
      if (e.tag == ChangeTag::kOpponentTeam && e.player.team == learner.team &&
          e.player != learner) {
        r += spec.teammate_loss_penalty;
      }
      return r;
    }
    default:
      return 0.0;
  }
}

}  // namespace

void RewardSpec::Validate() const {
  for (double v : {score_reward, concede_reward, possession_gain,
                   possession_loss, teammate_loss_penalty}) {
    if (!std::isfinite(v)) throw ConfigError("reward values must be finite");
  }
}

RewardSpec RewardSpec::operator+(const RewardSpec& o) const {
  if (possession_scope != o.possession_scope ||
      exclude_within_team_passes != o.exclude_within_team_passes ||
      reward_loose_pickups != o.reward_loose_pickups) {
    throw ArgumentError("cannot add reward specs with different scope flags");
  }
  RewardSpec sum = *this;
  sum.score_reward += o.score_reward;
  sum.concede_reward += o.concede_reward;
  sum.possession_gain += o.possession_gain;
  sum.possession_loss += o.possession_loss;
  sum.teammate_loss_penalty += o.teammate_loss_penalty;
  return sum;
}

RewardSpec MakeRewardSpec(RewardPreset preset) {
  RewardSpec spec;
  switch (preset) {
    case RewardPreset::kSparse:
      break;
    case RewardPreset::kIndividualPossession:
      spec.possession_gain = 0.8;
      spec.possession_loss = -0.8;
      break;
    case RewardPreset::kTeamPossession:
    case RewardPreset::kCentralizedTeam:
      spec.possession_gain = 0.8;
      spec.possession_loss = -0.8;
      spec.possession_scope = PossessionScope::kTeam;
      break;
    case RewardPreset::kTeammateAssist:
      spec.possession_gain = 0.8;
      spec.possession_loss = -0.8;
      spec.teammate_loss_penalty = -0.8;
      break;
  }
  return spec;
}

std::string_view RewardPresetName(RewardPreset preset) {
  switch (preset) {
    case RewardPreset::kSparse:
      return "Sparse";
    case RewardPreset::kIndividualPossession:
      return "IndividualPossession";
    case RewardPreset::kTeamPossession:
      return "TeamPossession";
    case RewardPreset::kTeammateAssist:
      return "TeammateAssist";
    case RewardPreset::kCentralizedTeam:
      return "CentralizedTeam";
  }
  return "?";
}

std::optional<RewardPreset> ParseRewardPreset(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(RewardPreset::kCentralizedTeam); ++i) {
    const auto p = static_cast<RewardPreset>(i);
    if (RewardPresetName(p) == s) return p;
  }
  return std::nullopt;
}

std::map<PlayerId, double> ComputeRewards(std::span<const GameEvent> events,
                                          std::span<const PlayerId> learners,
                                          const RewardSpec& spec) {
  if (learners.empty()) throw ArgumentError("no learners given");
  for (const GameEvent& e : events) {
    if (e.tick != events.front().tick) {
      throw ArgumentError("events span more than one tick");
    }
  }
  std::map<PlayerId, double> out;
  for (PlayerId learner : learners) {
    double r = 0.0;
    for (const GameEvent& e : events) r += EventReward(e, learner, spec);
    out[learner] = r;
  }
  return out;
}

double RewardFor(std::span<const GameEvent> events, PlayerId learner,
                 const RewardSpec& spec) {
  double r = 0.0;
  for (const GameEvent& e : events) r += EventReward(e, learner, spec);
  return r;
}

}  // namespace sts2
