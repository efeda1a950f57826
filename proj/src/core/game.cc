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

#include "sts2/game.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sts2 {
namespace {

void Require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("invalid GameConfig: ") + what);
}

Vec2 Unit(Vec2 v, Vec2 fallback) {
  const double n = v.Norm();
  if (n <= 0.0) return fallback;
  return v * (1.0 / n);
}

// Clamps `pos` into the rink and zeroes the velocity component that pushes
// against a wall.
void ClampToRink(const GameConfig& c, Vec2& pos, Vec2& vel) {
  if (pos.x > c.half_width) {
    pos.x = c.half_width;
    vel.x = std::min(vel.x, 0.0);
  } else if (pos.x < -c.half_width) {
    pos.x = -c.half_width;
    vel.x = std::max(vel.x, 0.0);
  }
  if (pos.y > c.half_length) {
    pos.y = c.half_length;
    vel.y = std::min(vel.y, 0.0);
  } else if (pos.y < -c.half_length) {
    pos.y = -c.half_length;
    vel.y = std::max(vel.y, 0.0);
  }
}

GameEvent MakeEvent(EventKind kind, int tick, PlayerId player,
                    PlayerId other = {}, ChangeTag tag = ChangeTag::kLoose) {
  return GameEvent{kind, tick, player, other, tag};
}

void PlaceFaceoff(const GameConfig& config, GameState& state) {
  const std::vector<Vec2> layout = FaceoffLayout(config);
  for (std::size_t s = 0; s < state.players.size(); ++s) {
    state.players[s] = PlayerState{layout[s], {}};
  }
}

void PlaceRandom(const GameConfig& config, GameState& state) {
  for (PlayerState& p : state.players) {
    p.pos.x = state.rng.Uniform(-config.half_width, config.half_width);
    p.pos.y = state.rng.Uniform(-config.half_length, config.half_length);
    const double speed = state.rng.Uniform(0.0, config.max_speed);
    const double heading = state.rng.Uniform(0.0, 2.0 * std::numbers::pi);
    p.vel = {speed * std::cos(heading), speed * std::sin(heading)};
  }
  ball::Loose loose;
  loose.pos.x = state.rng.Uniform(-config.half_width, config.half_width);
  loose.pos.y = state.rng.Uniform(-config.half_length, config.half_length);
  state.ball = loose;
}

void StartEpisode(const GameConfig& config, GameState& state) {
  state.tick = 0;
  state.score = {0, 0};
  state.players.assign(static_cast<std::size_t>(config.num_players()), {});
  if (config.randomize_start) {
    PlaceRandom(config, state);
  } else {
    PlaceFaceoff(config, state);
    state.ball = ball::Loose{};
  }
  if (config.faceoff_countdown > 0) {
    state.phase = GamePhase{PhaseKind::kFaceoff, config.faceoff_countdown};
  } else {
    state.phase = GamePhase{PhaseKind::kPlay, 0};
  }
}

// Nearest teammate of `from`, ties to the lowest index.
std::optional<PlayerId> PassTarget(const GameState& state, PlayerId from) {
  std::optional<PlayerId> best;
  double best_d = 0.0;
  const Vec2 origin = state.player(from).pos;
  for (int i = 0; i < state.k(); ++i) {
    const PlayerId mate{from.team, i};
    if (mate == from) continue;
    const double d = Distance(origin, state.player(mate).pos);
    if (!best || d < best_d) {
      best = mate;
      best_d = d;
    }
  }
  return best;
}

struct Hit {
  PlayerId who;
  double t = 0.0;
};

// Earliest player of `team` within `radius` of segment [a, b].
std::optional<Hit> FirstContact(const GameState& state, TeamId team, Vec2 a,
                                Vec2 b, double radius) {
  std::optional<Hit> best;
  for (int i = 0; i < state.k(); ++i) {
    const PlayerId p{team, i};
    double t = 0.0;
    if (PointSegmentDistance(state.player(p).pos, a, b, &t) > radius) continue;
    if (!best || t < best->t) best = Hit{p, t};
  }
  return best;
}

}  // namespace

void GameConfig::Validate() const {
  Require(k >= 1, "k >= 1");
  Require(half_width > 0.0, "half_width > 0");
  Require(half_length > 0.0, "half_length > 0");
  Require(goal_mouth_width > 0.0, "goal_mouth_width > 0");
  Require(goal_mouth_width < 2.0 * half_width,
          "goal_mouth_width < 2 * half_width");
  Require(max_speed > 0.0, "max_speed > 0");
  Require(accel_per_tick > 0.0, "accel_per_tick > 0");
  Require(friction_coeff >= 0.0 && friction_coeff < 1.0,
          "friction_coeff in [0, 1)");
  Require(pickup_radius > 0.0, "pickup_radius > 0");
  Require(steal_radius > 0.0, "steal_radius > 0");
  Require(steal_probability_per_tick >= 0.0 && steal_probability_per_tick <= 1.0,
          "steal_probability_per_tick in [0, 1]");
  Require(pass_speed > 0.0, "pass_speed > 0");
  Require(shot_speed > 0.0, "shot_speed > 0");
  Require(block_radius > 0.0, "block_radius > 0");
  Require(episode_length > 0, "episode_length > 0");
  Require(faceoff_countdown >= 0, "faceoff_countdown >= 0");
}

Vec2 GameState::BallPosition() const {
  return std::visit(
      [this](const auto& b) -> Vec2 {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ball::Controlled>) {
          return player(b.owner).pos;
        } else {
          return b.pos;
        }
      },
      ball);
}

std::string_view EventName(EventKind kind) {
  switch (kind) {
    case EventKind::kGoal:
      return "Goal";
    case EventKind::kPossessionGained:
      return "PossessionGained";
    case EventKind::kPossessionLost:
      return "PossessionLost";
    case EventKind::kShotTaken:
      return "ShotTaken";
    case EventKind::kShotBlocked:
      return "ShotBlocked";
    case EventKind::kShotMissed:
      return "ShotMissed";
    case EventKind::kPassCompleted:
      return "PassCompleted";
    case EventKind::kPassIntercepted:
      return "PassIntercepted";
    case EventKind::kEpisodeEnded:
      return "EpisodeEnded";
  }
  return "?";
}

std::string_view ChangeTagName(ChangeTag tag) {
  switch (tag) {
    case ChangeTag::kOpponentTeam:
      return "OpponentTeam";
    case ChangeTag::kOwnTeamPass:
      return "OwnTeamPass";
    case ChangeTag::kLoose:
      return "Loose";
  }
  return "?";
}

std::optional<EventKind> ParseEventKind(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(EventKind::kEpisodeEnded); ++i) {
    const auto kind = static_cast<EventKind>(i);
    if (EventName(kind) == s) return kind;
  }
  return std::nullopt;
}

std::optional<ChangeTag> ParseChangeTag(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(ChangeTag::kLoose); ++i) {
    const auto tag = static_cast<ChangeTag>(i);
    if (ChangeTagName(tag) == s) return tag;
  }
  return std::nullopt;
}

std::vector<Vec2> FaceoffLayout(const GameConfig& config) {
  const int k = config.k;
  std::vector<Vec2> layout(static_cast<std::size_t>(2 * k));
  const double depth = 0.3 * config.half_length;
  for (int i = 0; i < k; ++i) {
    const double x =
        0.8 * config.half_width * (2.0 * (i + 1) / (k + 1) - 1.0);
    layout[static_cast<std::size_t>(i)] = {x, -depth};
    layout[static_cast<std::size_t>(k + i)] = {x, depth};
  }
  return layout;
}

Vec2 MoveDirection(Action a, TeamId team) {
  const double s = AttackSign(team);
  switch (a) {
    case Action::kForward:
      return {0.0, s};
    case Action::kBackward:
      return {0.0, -s};
    // Lateral moves are the same world axis for both teams, so that a
    // y-reflected match with swapped teams replays the same x motion.
    case Action::kLeft:
      return {-1.0, 0.0};
    case Action::kRight:
      return {1.0, 0.0};
    default:
      return {};
  }
}

GameState NewMatch(const GameConfig& config) {
  config.Validate();
  GameState state;
  state.rng = CounterRng(config.seed, 0);
  StartEpisode(config, state);
  return state;
}

GameState ResetEpisode(const GameState& state, const GameConfig& config) {
  GameState next;
  next.rng = state.rng;
  StartEpisode(config, next);
  return next;
}

std::optional<PlayerId> PossessionIndicator(const GameState& state) {
  if (const auto* c = std::get_if<ball::Controlled>(&state.ball)) {
    return c->owner;
  }
  return std::nullopt;
}

void StepInPlace(const GameConfig& config, GameState& state,
                 const ActionSet& actions, std::vector<GameEvent>& events) {
  events.clear();
  if (state.phase.kind == PhaseKind::kFinished) {
    throw LifecycleError("step called on a finished episode");
  }
  const int k = state.k();
  if (static_cast<int>(actions.size()) != 2 * k) {
    throw ArgumentError("action set has " + std::to_string(actions.size()) +
                        " entries, expected " + std::to_string(2 * k));
  }
  const int now = state.tick + 1;

  if (state.phase.kind == PhaseKind::kFaceoff) {
    if (--state.phase.countdown <= 0) state.phase = {PhaseKind::kPlay, 0};
  } else {
    const std::optional<PlayerId> owner_before = PossessionIndicator(state);
    bool control_changed = false;
    bool goal = false;
    TeamId scoring_team = TeamId::kHome;

    // (1) movement
    for (int s = 0; s < 2 * k; ++s) {
      const PlayerId id = PlayerId::FromSlot(s, k);
      PlayerState& p = state.players[static_cast<std::size_t>(s)];
      const std::optional<Action>& a = actions[static_cast<std::size_t>(s)];
      if (a && IsMovement(*a)) {
        p.vel += MoveDirection(*a, id.team) * config.accel_per_tick;
      }
      p.vel = p.vel * (1.0 - config.friction_coeff);
      const double speed = p.vel.Norm();
      if (speed > config.max_speed) p.vel = p.vel * (config.max_speed / speed);
      p.pos += p.vel;
      ClampToRink(config, p.pos, p.vel);
    }

    // (2) ball action by the carrier
    if (owner_before) {
      const PlayerId carrier = *owner_before;
      const std::optional<Action>& a =
          actions[static_cast<std::size_t>(carrier.Slot(k))];
      const Vec2 from = state.player(carrier).pos;
      const double s = AttackSign(carrier.team);
      if (a == Action::kPass) {
        if (const auto target = PassTarget(state, carrier)) {
          const Vec2 dir =
              Unit(state.player(*target).pos - from, Vec2{0.0, s});
          state.ball = ball::InFlight{from, dir * config.pass_speed,
                                      ball::FlightKind::kPass, carrier,
                                      *target};
          events.push_back(MakeEvent(EventKind::kPossessionLost, now, carrier,
                                     {}, ChangeTag::kOwnTeamPass));
          control_changed = true;
        }
      } else if (a == Action::kShoot) {
        const Vec2 aim{0.0, s * config.half_length};
        const Vec2 dir = Unit(aim - from, Vec2{0.0, s});
        state.ball = ball::InFlight{from, dir * config.shot_speed,
                                    ball::FlightKind::kShot, carrier, carrier};
        events.push_back(MakeEvent(EventKind::kShotTaken, now, carrier));
        events.push_back(MakeEvent(EventKind::kPossessionLost, now, carrier,
                                   {}, ChangeTag::kLoose));
        control_changed = true;
      }
    }

    // (3) flight
    if (auto* f = std::get_if<ball::InFlight>(&state.ball)) {
      const TeamId defenders = Opponent(f->origin.team);
      const Vec2 p0 = f->pos;
      Vec2 p1 = p0 + f->vel;
      if (f->kind == ball::FlightKind::kShot) {
        const double s = AttackSign(f->origin.team);
        const double goal_y = s * config.half_length;
        const bool crosses = (p1.y - goal_y) * s >= 0.0;
        if (crosses) {
          const double dy = p1.y - p0.y;
          const double t = dy != 0.0 ? (goal_y - p0.y) / dy : 0.0;
          p1 = p0 + (p1 - p0) * std::clamp(t, 0.0, 1.0);
          p1.y = goal_y;
        }
        const PlayerId shooter = f->origin;
        if (const auto hit =
                FirstContact(state, defenders, p0, p1, config.block_radius)) {
          events.push_back(MakeEvent(EventKind::kShotBlocked, now, hit->who,
                                     shooter));
          events.push_back(MakeEvent(EventKind::kPossessionGained, now,
                                     hit->who, {}, ChangeTag::kOpponentTeam));
          state.ball = ball::Controlled{hit->who};
          control_changed = true;
        } else if (crosses) {
          if (std::abs(p1.x) <= 0.5 * config.goal_mouth_width) {
            events.push_back(MakeEvent(EventKind::kGoal, now, shooter));
            ++state.score[static_cast<std::size_t>(shooter.team)];
            goal = true;
            scoring_team = shooter.team;
          } else {
            events.push_back(MakeEvent(EventKind::kShotMissed, now, shooter));
            Vec2 pos = p1;
            Vec2 vel{};
            ClampToRink(config, pos, vel);
            state.ball = ball::Loose{pos, {}};
          }
        } else {
          f->pos = p1;
        }
      } else {
        const auto block =
            FirstContact(state, defenders, p0, p1, config.block_radius);
        double t_recv = 0.0;
        const bool received =
            PointSegmentDistance(state.player(f->target).pos, p0, p1,
                                 &t_recv) <= config.pickup_radius;
        const PlayerId passer = f->origin;
        const PlayerId target = f->target;
        if (block && (!received || block->t <= t_recv)) {
          events.push_back(MakeEvent(EventKind::kPassIntercepted, now, passer,
                                     block->who));
          events.push_back(MakeEvent(EventKind::kPossessionGained, now,
                                     block->who, {},
                                     ChangeTag::kOpponentTeam));
          state.ball = ball::Controlled{block->who};
          control_changed = true;
        } else if (received) {
          events.push_back(
              MakeEvent(EventKind::kPassCompleted, now, passer, target));
          events.push_back(MakeEvent(EventKind::kPossessionGained, now, target,
                                     {}, ChangeTag::kOwnTeamPass));
          state.ball = ball::Controlled{target};
          control_changed = true;
        } else {
          Vec2 vel = f->vel;
          ClampToRink(config, p1, vel);
          f->pos = p1;
          f->vel = Unit(state.player(target).pos - p1, Unit(f->vel, {})) *
                   config.pass_speed;
        }
      }
    }

    // (4) possession contest
    if (!goal) {
      if (auto* loose = std::get_if<ball::Loose>(&state.ball)) {
        loose->pos += loose->vel;
        loose->vel = loose->vel * (1.0 - config.friction_coeff);
        ClampToRink(config, loose->pos, loose->vel);
        std::optional<PlayerId> best;
        double best_d = 0.0;
        for (int s = 0; s < 2 * k; ++s) {
          const PlayerId id = PlayerId::FromSlot(s, k);
          const double d = Distance(state.player(id).pos, loose->pos);
          if (d > config.pickup_radius) continue;
          if (!best || d < best_d || (d == best_d && ClaimsBefore(id, *best))) {
            best = id;
            best_d = d;
          }
        }
        if (best) {
          events.push_back(MakeEvent(EventKind::kPossessionGained, now, *best,
                                     {}, ChangeTag::kLoose));
          state.ball = ball::Controlled{*best};
        }
      } else if (!control_changed && owner_before) {
        // Steals: one draw per defender in range, in index order.
        const PlayerId carrier = *owner_before;
        const Vec2 at = state.player(carrier).pos;
        for (int i = 0; i < k; ++i) {
          const PlayerId d{Opponent(carrier.team), i};
          if (Distance(state.player(d).pos, at) > config.steal_radius) {
            continue;
          }
          if (state.rng.Uniform() < config.steal_probability_per_tick) {
            events.push_back(MakeEvent(EventKind::kPossessionLost, now,
                                       carrier, {}, ChangeTag::kOpponentTeam));
            events.push_back(MakeEvent(EventKind::kPossessionGained, now, d,
                                       {}, ChangeTag::kOpponentTeam));
            state.ball = ball::Controlled{d};
            break;
          }
        }
      }
    }

    // (5) scoring: kick-off goes to the conceding team.
    if (goal) {
      PlaceFaceoff(config, state);
      const PlayerId taker{Opponent(scoring_team), 0};
      state.ball = ball::Loose{state.player(taker).pos, {}};
      if (config.faceoff_countdown > 0) {
        state.phase = {PhaseKind::kFaceoff, config.faceoff_countdown};
      }
    }
  }

  // (6) timeout
  state.tick = now;
  if (state.tick >= config.episode_length) {
    state.phase = {PhaseKind::kFinished, 0};
    events.push_back(MakeEvent(EventKind::kEpisodeEnded, now, {}));
  }
}

StepResult Step(const GameConfig& config, const GameState& state,
                const ActionSet& actions) {
  StepResult result{state, {}};
  StepInPlace(config, result.state, actions, result.events);
  return result;
}

StepResult Step(const GameConfig& config, const GameState& state,
                const std::map<PlayerId, Action>& actions) {
  const int k = state.k();
  ActionSet set(static_cast<std::size_t>(2 * k));
  for (const auto& [id, action] : actions) {
    if (id.index < 0 || id.index >= k) {
      throw ArgumentError("unknown player " + ToString(id));
    }
    set[static_cast<std::size_t>(id.Slot(k))] = action;
  }
  return Step(config, state, set);
}

int ObservationSize(int k) { return 10 * k + 3; }

void EncodeObservation(const GameConfig& config, const GameState& state,
                       PlayerId viewer, std::span<float> out) {
  const int k = state.k();
  if (viewer.index < 0 || viewer.index >= k) {
    throw ArgumentError("unknown viewer " + ToString(viewer));
  }
  if (static_cast<int>(out.size()) != ObservationSize(k)) {
    throw ArgumentError("observation buffer has wrong size");
  }
  const double s = AttackSign(viewer.team);
  const std::optional<PlayerId> owner = PossessionIndicator(state);
  std::size_t at = 0;
  auto put = [&](PlayerId p) {
    const PlayerState& ps = state.player(p);
    out[at++] = static_cast<float>(ps.pos.x / config.half_width);
    out[at++] = static_cast<float>(s * ps.pos.y / config.half_length);
    out[at++] = static_cast<float>(ps.vel.x / config.max_speed);
    out[at++] = static_cast<float>(s * ps.vel.y / config.max_speed);
    out[at++] = owner == p ? 1.0f : 0.0f;
  };
  put(viewer);
  for (int i = 0; i < k; ++i) {
    if (i != viewer.index) put({viewer.team, i});
  }
  for (int i = 0; i < k; ++i) put({Opponent(viewer.team), i});
  out[at++] = static_cast<float>(s);
  out[at++] = std::holds_alternative<ball::Loose>(state.ball) ? 1.0f : 0.0f;
  out[at++] = static_cast<float>(
      static_cast<double>(config.episode_length - state.tick) /
      config.episode_length);
}

std::vector<float> EncodeObservation(const GameConfig& config,
                                     const GameState& state, PlayerId viewer) {
  std::vector<float> out(static_cast<std::size_t>(ObservationSize(state.k())));
  EncodeObservation(config, state, viewer, out);
  return out;
}

}  // namespace sts2
