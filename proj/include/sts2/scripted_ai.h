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

#ifndef STS2_SCRIPTED_AI_H_
#define STS2_SCRIPTED_AI_H_

#include "sts2/game.h"

namespace sts2 {

enum class Difficulty : std::uint8_t { kEasy, kNormal };

struct ScriptedProfile {
  double shoot_range = 0.45;          // arena units from the goal centre
  double open_lane_clearance = 0.08;  // arena units
  Vec2 support_offset = {0.25, 0.2};  // lateral, ahead of the anchor
  double defend_depth = 0.25;         // fraction of half_length
  Difficulty difficulty = Difficulty::kNormal;

  void Validate(const GameConfig& config) const;
  bool operator==(const ScriptedProfile&) const = default;
};

// Which rule of the cascade fired; exposed for tests and debugging.
enum class ScriptedRule : std::uint8_t {
  kShoot,         // R1
  kPass,          // R2
  kAdvance,       // R3
  kHoldPost,      // R4: opponent carries in its own half; do not chase
  kChase,         // R5: opponent carries in my half
  kChaseBall,     // R6
  kSupport,       // R7
};

struct ScriptedDecision {
  Action action = Action::kForward;
  ScriptedRule rule = ScriptedRule::kSupport;
};

// Pure rule cascade; first matching rule wins.
ScriptedDecision ScriptedDecide(const GameConfig& config,
                                const GameState& state, PlayerId me,
                                const ScriptedProfile& profile);

inline Action ScriptedAction(const GameConfig& config, const GameState& state,
                             PlayerId me, const ScriptedProfile& profile) {
  return ScriptedDecide(config, state, me, profile).action;
}

// The movement action whose one-tick displacement leaves `me` closest to
// `target`. Candidates are tried Forward, Backward, Left, Right; ties keep
// the earlier one.
Action MoveToward(const GameConfig& config, const GameState& state,
                  PlayerId me, Vec2 target, bool allow_forward = true);

// True if no player of `team` lies within `clearance` of segment [a, b].
bool LaneClear(const GameState& state, TeamId team, Vec2 a, Vec2 b,
               double clearance);

// The post a defender holds: on the segment from its own goal centre toward
// `threat`, defend_depth * half_length out from the goal line.
Vec2 DefensivePost(const GameConfig& config, TeamId team, Vec2 threat,
                   const ScriptedProfile& profile);

}  // namespace sts2

#endif  // STS2_SCRIPTED_AI_H_
