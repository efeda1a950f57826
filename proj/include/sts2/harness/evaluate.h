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


// Controllers that fill an ActionSet for a lineup of slots, match
// statistics in the per-player "score rate / possession" table format, and
// greedy evaluation over many episodes.

#ifndef STS2_HARNESS_EVALUATE_H_
#define STS2_HARNESS_EVALUATE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sts2/game.h"
#include "sts2/harness/checkpoint.h"
#include "sts2/harness/experiment.h"
#include "sts2/nn/mlp.h"
#include "sts2/serialize.h"

namespace sts2::harness {

// Greedy network acting for one player, or for a group through the joint
// action codec (the group's first player is the observation viewer).
struct NetworkPolicy {
  nn::Mlp net;
  int joint_agents = 1;
};

class Lineup {
 public:
  // Frozen checkpoints are loaded from disk. Learner slots act through
  // `learner` (required when any slot is a learner); with a joint learner
  // every learner slot forms one group. Human slots are left unfilled.
  // Throws ConfigError / CheckpointError.
  static Lineup Build(const GameConfig& game, const SlotAssignment& slots,
                      std::shared_ptr<const NetworkPolicy> learner = nullptr);

  // Fills every non-human entry of `actions` (sized 2k). Safe to call
  // concurrently on one Lineup.
  void Act(const GameConfig& game, const GameState& state,
           ActionSet& actions) const;

 private:
  struct Group {
    std::vector<PlayerId> players;
    ScriptedProfile profile;
    std::shared_ptr<const NetworkPolicy> policy;  // null: scripted
  };
  std::vector<Group> groups_;
};

// Loads a checkpoint for a single-player frozen slot and checks it against
// the game. Throws CheckpointError / ConfigError.
std::shared_ptr<const NetworkPolicy> LoadFrozenPolicy(const std::string& path,
                                                      const GameConfig& game);

struct PlayerStats {
  std::int64_t goals = 0;
  std::int64_t possession_ticks = 0;
  std::int64_t own_half_possession_ticks = 0;
  bool operator==(const PlayerStats&) const = default;
};

struct MatchStats {
  int k = 0;
  int episodes = 0;
  int scoreless_episodes = 0;
  std::vector<PlayerStats> players;  // by PlayerId::Slot(k)

  static MatchStats Empty(int k);
  void Merge(const MatchStats& other);
  const PlayerStats& of(PlayerId p) const {
    return players[static_cast<std::size_t>(p.Slot(k))];
  }

  std::int64_t total_goals() const;
  std::int64_t total_possession() const;
  // Percentages; 0 when the denominator is 0.
  double ScoreRate(PlayerId p) const;
  double PossessionShare(PlayerId p) const;
  double TeamScoreRate(TeamId t) const;
  double TeamPossessionShare(TeamId t) const;
  // Share of `p`'s possession ticks spent in its own half, percent.
  double OwnHalfPossessionShare(PlayerId p) const;
  double ScorelessShare() const;

  bool operator==(const MatchStats&) const = default;
};

// Accumulates one post-step state and its events.
void TallyTick(MatchStats& stats, const GameState& state,
               const std::vector<GameEvent>& events);

Json StatsToJson(const MatchStats& stats);
// Two-row table: "Score rate" and "Possession", one column per player.
std::string FormatStatsTable(const MatchStats& stats);

// Runs `episodes` full episodes from NewMatch with seed DeriveSeed(seed, e)
// for episode e. When `replay_dir` is non-empty each episode's log is
// written to replay_dir/episode_<e>.ndjson. Throws ArgumentError when
// episodes < 1.
MatchStats Evaluate(const GameConfig& game, const Lineup& lineup, int episodes,
                    std::uint64_t seed, const std::string& replay_dir = "");
// Single-threaded reference implementation of Evaluate.
MatchStats EvaluateSerial(const GameConfig& game, const Lineup& lineup,
                          int episodes, std::uint64_t seed,
                          const std::string& replay_dir = "");

// Team A and team B each give one slot spec per index. Even episodes put A
// at Home, odd episodes swap ends; the result always reports A as Home.
MatchStats Crossplay(const GameConfig& game, const std::vector<SlotSpec>& team_a,
                     const std::vector<SlotSpec>& team_b, int episodes,
                     std::uint64_t seed);

// Stats recomputed straight from replay log text, without the simulator.
MatchStats RecountFromReplayFiles(const std::vector<std::string>& paths);

}  // namespace sts2::harness

#endif  // STS2_HARNESS_EVALUATE_H_
