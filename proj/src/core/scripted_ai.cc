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

#include "sts2/scripted_ai.h"

#include <algorithm>

namespace sts2 {
namespace {

// Position in `team`'s attacking frame: negative means its own half.
double AttackY(TeamId team, Vec2 pos) { return AttackSign(team) * pos.y; }

std::optional<PlayerId> NearestTeammate(const GameState& state, PlayerId me) {
  std::optional<PlayerId> best;
  double best_d = 0.0;
  for (int i = 0; i < state.k(); ++i) {
    const PlayerId mate{me.team, i};
    if (mate == me) continue;
    const double d = Distance(state.player(me).pos, state.player(mate).pos);
    if (!best || d < best_d) {
      best = mate;
      best_d = d;
    }
  }
  return best;
}

bool NearestOnTeamTo(const GameState& state, PlayerId me, Vec2 point) {
  const double mine = Distance(state.player(me).pos, point);
  for (int i = 0; i < state.k(); ++i) {
    const PlayerId mate{me.team, i};
    if (mate == me) continue;
    const double d = Distance(state.player(mate).pos, point);
    if (d < mine || (d == mine && i < me.index)) return false;
  }
  return true;
}

Vec2 ClampInside(const GameConfig& c, Vec2 p) {
  return {std::clamp(p.x, -c.half_width, c.half_width),
          std::clamp(p.y, -c.half_length, c.half_length)};
}

}  // namespace

void ScriptedProfile::Validate(const GameConfig& config) const {
  if (!(shoot_range > 0.0 && shoot_range <= config.half_length)) {
    throw ConfigError("invalid ScriptedProfile: shoot_range in (0, half_length]");
  }
  if (!(defend_depth > 0.0 && defend_depth <= 1.0)) {
    throw ConfigError("invalid ScriptedProfile: defend_depth in (0, 1]");
  }
  if (!(open_lane_clearance >= 0.0)) {
    throw ConfigError("invalid ScriptedProfile: open_lane_clearance >= 0");
  }
}

bool LaneClear(const GameState& state, TeamId team, Vec2 a, Vec2 b,
               double clearance) {
  for (int i = 0; i < state.k(); ++i) {
    if (PointSegmentDistance(state.player({team, i}).pos, a, b) < clearance) {
      return false;
    }
  }
  return true;
}

Vec2 DefensivePost(const GameConfig& config, TeamId team, Vec2 threat,
                   const ScriptedProfile& profile) {
  const Vec2 goal{0.0, -AttackSign(team) * config.half_length};
  Vec2 dir = threat - goal;
  const double n = dir.Norm();
  dir = n > 0.0 ? dir * (1.0 / n) : Vec2{0.0, AttackSign(team)};
  return goal + dir * (profile.defend_depth * config.half_length);
}

Action MoveToward(const GameConfig& config, const GameState& state,
                  PlayerId me, Vec2 target, bool allow_forward) {
  static constexpr Action kOrder[] = {Action::kForward, Action::kBackward,
                                      Action::kLeft, Action::kRight};
  const Vec2 pos = state.player(me).pos;
  Action best = allow_forward ? Action::kForward : Action::kBackward;
  double best_d = -1.0;
  for (Action a : kOrder) {
    if (a == Action::kForward && !allow_forward) continue;
    const Vec2 next = pos + MoveDirection(a, me.team) * config.max_speed;
    const double d = Distance(next, target);
    if (best_d < 0.0 || d < best_d) {
      best = a;
      best_d = d;
    }
  }
  return best;
}

ScriptedDecision ScriptedDecide(const GameConfig& config,
                                const GameState& state, PlayerId me,
                                const ScriptedProfile& profile) {
  const bool easy = profile.difficulty == Difficulty::kEasy;
  const double clearance =
      easy ? 2.0 * profile.open_lane_clearance : profile.open_lane_clearance;
  const double s = AttackSign(me.team);
  const Vec2 pos = state.player(me).pos;
  const Vec2 opp_goal{0.0, s * config.half_length};
  const TeamId them = Opponent(me.team);
  const std::optional<PlayerId> owner = PossessionIndicator(state);

  if (owner == me) {
    if (Distance(pos, opp_goal) <= profile.shoot_range &&
        LaneClear(state, them, pos, opp_goal, clearance)) {
      return {Action::kShoot, ScriptedRule::kShoot};
    }
    if (const auto mate = NearestTeammate(state, me)) {
      const Vec2 mate_pos = state.player(*mate).pos;
      if (Distance(mate_pos, opp_goal) < Distance(pos, opp_goal) &&
          LaneClear(state, them, pos, mate_pos, clearance)) {
        return {Action::kPass, ScriptedRule::kPass};
      }
    }
    return {MoveToward(config, state, me, opp_goal), ScriptedRule::kAdvance};
  }

  if (owner && owner->team == them) {
    const Vec2 carrier = state.player(*owner).pos;
    bool hold = AttackY(them, carrier) < 0.0;
    // Easy defenders also wait at their post until the carrier is close.
    if (easy && !hold) {
      hold = AttackY(me.team, carrier) > -0.5 * config.half_length;
    }
    if (hold) {
      const Vec2 post = DefensivePost(config, me.team, carrier, profile);
      // Never step forward across the centre line while holding.
      const bool forward_ok = AttackY(me.team, pos) + config.max_speed <= 0.0;
      return {MoveToward(config, state, me, post, forward_ok),
              ScriptedRule::kHoldPost};
    }
    return {MoveToward(config, state, me, carrier), ScriptedRule::kChase};
  }

  const Vec2 ball_pos = state.BallPosition();
  if (!owner && NearestOnTeamTo(state, me, ball_pos)) {
    return {MoveToward(config, state, me, ball_pos), ScriptedRule::kChaseBall};
  }

  // Support: anchor on the teammate carrying the ball, otherwise on the
  // teammate nearest to it.
  PlayerId anchor = me;
  if (owner && owner->team == me.team) {
    anchor = *owner;
  } else {
    double best = -1.0;
    for (int i = 0; i < state.k(); ++i) {
      const PlayerId mate{me.team, i};
      if (mate == me) continue;
      const double d = Distance(state.player(mate).pos, ball_pos);
      if (best < 0.0 || d < best) {
        best = d;
        anchor = mate;
      }
    }
  }
  const Vec2 anchor_pos = state.player(anchor).pos;
  const double side = anchor_pos.x >= 0.0 ? -1.0 : 1.0;
  const Vec2 spot = ClampInside(
      config, anchor_pos + Vec2{side * profile.support_offset.x,
                                s * profile.support_offset.y});
  return {MoveToward(config, state, me, spot), ScriptedRule::kSupport};
}

}  // namespace sts2
