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

// Deterministic fixed-timestep k-vs-k team sports simulation.
//
// The rink spans x in [-half_width, half_width] and y in [-half_length,
// half_length]. Home defends the goal at y = -half_length and attacks +y;
// Away the reverse. One Step() advances a single tick and resolves, in order:
//
//   1. movement   accel along the chosen axis, friction, speed clamp, walls
//   2. ball action the carrier's Pass / Shoot releases the ball
//   3. flight     in-flight ball advances; blocks, goals, misses, receptions
//   4. contest    loose-ball claims, then steals against the carrier
//   5. scoring    a goal re-enters Faceoff; play continues until timeout
//   6. timeout    tick == episode_length finishes the episode
//
// All randomness comes from one counter-based stream whose position is part
// of the GameState, so a state plus an action sequence fully determines the
// future.

#ifndef STS2_GAME_H_
#define STS2_GAME_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sts2/rng.h"
#include "sts2/types.h"

namespace sts2 {

struct GameConfig {
  int k = 1;
  double half_width = 0.5;
  double half_length = 1.0;
  double goal_mouth_width = 0.3;
  double max_speed = 0.02;
  double accel_per_tick = 0.004;
  double friction_coeff = 0.05;
  double pickup_radius = 0.05;
  double steal_radius = 0.06;
  double steal_probability_per_tick = 0.05;
  double pass_speed = 0.05;
  double shot_speed = 0.08;
  double block_radius = 0.05;
  int episode_length = 3000;
  int faceoff_countdown = 30;
  bool randomize_start = false;
  std::uint64_t seed = 0;

  int num_players() const { return 2 * k; }

  // Throws ConfigError naming the first violated bound.
  void Validate() const;

  bool operator==(const GameConfig&) const = default;
};

struct PlayerState {
  Vec2 pos;
  Vec2 vel;
  bool operator==(const PlayerState&) const = default;
};

namespace ball {
struct Controlled {
  PlayerId owner;
  bool operator==(const Controlled&) const = default;
};
enum class FlightKind : std::uint8_t { kPass, kShot };
struct InFlight {
  Vec2 pos;
  Vec2 vel;
  FlightKind kind = FlightKind::kShot;
  PlayerId origin;  // passer or shooter
  PlayerId target;  // pass receiver; unused for shots
  bool operator==(const InFlight&) const = default;
};
struct Loose {
  Vec2 pos;
  Vec2 vel;
  bool operator==(const Loose&) const = default;
};
}  // namespace ball

using BallState = std::variant<ball::Controlled, ball::InFlight, ball::Loose>;

enum class PhaseKind : std::uint8_t { kFaceoff, kPlay, kFinished };

struct GamePhase {
  PhaseKind kind = PhaseKind::kFaceoff;
  int countdown = 0;  // Faceoff only
  bool operator==(const GamePhase&) const = default;
};

struct GameState {
  int tick = 0;
  std::vector<PlayerState> players;  // indexed by PlayerId::Slot(k)
  BallState ball = ball::Loose{};
  std::array<int, 2> score = {0, 0};  // indexed by TeamId
  GamePhase phase;
  CounterRng rng;

  int k() const { return static_cast<int>(players.size()) / 2; }
  const PlayerState& player(PlayerId p) const { return players[p.Slot(k())]; }
  PlayerState& player(PlayerId p) { return players[p.Slot(k())]; }
  Vec2 BallPosition() const;

  bool operator==(const GameState&) const = default;
};

// Whose possession a change of control came from / went to.
enum class ChangeTag : std::uint8_t { kOpponentTeam, kOwnTeamPass, kLoose };

enum class EventKind : std::uint8_t {
  kGoal,
  kPossessionGained,
  kPossessionLost,
  kShotTaken,
  kShotBlocked,
  kShotMissed,
  kPassCompleted,
  kPassIntercepted,
  kEpisodeEnded,
};

// Flat tagged record. `player` is the subject (scorer, gainer, loser,
// shooter, blocker, passer); `other` is the counterpart where the event has
// one (pass receiver or interceptor).
struct GameEvent {
  EventKind kind = EventKind::kGoal;
  int tick = 0;
  PlayerId player;
  PlayerId other;
  ChangeTag tag = ChangeTag::kLoose;

  bool operator==(const GameEvent&) const = default;
};

std::string_view EventName(EventKind kind);
std::string_view ChangeTagName(ChangeTag tag);
std::optional<EventKind> ParseEventKind(std::string_view s);
std::optional<ChangeTag> ParseChangeTag(std::string_view s);

// One entry per slot; nullopt means coast.
using ActionSet = std::vector<std::optional<Action>>;

struct StepResult {
  GameState state;
  std::vector<GameEvent> events;
};

GameState NewMatch(const GameConfig& config);

// Starts a fresh episode. Scores and tick reset; positions follow the faceoff
// layout, or are drawn uniformly when randomize_start is set. The RNG stream
// continues from `state`.
GameState ResetEpisode(const GameState& state, const GameConfig& config);

StepResult Step(const GameConfig& config, const GameState& state,
                const ActionSet& actions);
StepResult Step(const GameConfig& config, const GameState& state,
                const std::map<PlayerId, Action>& actions);

// In-place variant used by hot loops; `events` is cleared first.
void StepInPlace(const GameConfig& config, GameState& state,
                 const ActionSet& actions, std::vector<GameEvent>& events);

std::optional<PlayerId> PossessionIndicator(const GameState& state);

// Length 10k + 3. Coordinates are expressed in the viewer's attacking frame
// (y and vy multiplied by the viewer's attack sign).
int ObservationSize(int k);
std::vector<float> EncodeObservation(const GameConfig& config,
                                     const GameState& state, PlayerId viewer);
void EncodeObservation(const GameConfig& config, const GameState& state,
                       PlayerId viewer, std::span<float> out);

// Positions used at kick-off. Home sits in the -y half.
std::vector<Vec2> FaceoffLayout(const GameConfig& config);

// World-frame unit direction of a movement action for a team.
Vec2 MoveDirection(Action a, TeamId team);

}  // namespace sts2

#endif  // STS2_GAME_H_
