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


#include "sts2/harness/evaluate.h"

#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "sts2/replay.h"
#include "sts2/rl/dqn.h"
#include "sts2/rl/joint_action.h"
#include "sts2/scripted_ai.h"

namespace sts2::harness {
namespace {

double Percent(std::int64_t part, std::int64_t whole) {
  return whole > 0 ? 100.0 * static_cast<double>(part) /
                         static_cast<double>(whole)
                   : 0.0;
}

MatchStats RunEpisode(const GameConfig& base, const Lineup& lineup,
                      std::uint64_t seed, int episode,
                      const std::string& replay_dir) {
  GameConfig game = base;
  game.seed = DeriveSeed(seed, static_cast<std::uint64_t>(episode));
  GameState state = NewMatch(game);
  MatchStats stats = MatchStats::Empty(game.k);
  ActionSet actions(static_cast<std::size_t>(game.num_players()));
  std::vector<GameEvent> events;

  std::ofstream log;
  std::unique_ptr<ReplayWriter> writer;
  if (!replay_dir.empty()) {
    const std::string path =
        replay_dir + "/episode_" + std::to_string(episode) + ".ndjson";
    log.open(path, std::ios::trunc);
    if (!log) throw ArgumentError("cannot write replay log " + path);
    writer = std::make_unique<ReplayWriter>(log, game);
  }
  while (state.phase.kind != PhaseKind::kFinished) {
    std::fill(actions.begin(), actions.end(), std::nullopt);
    lineup.Act(game, state, actions);
    StepInPlace(game, state, actions, events);
    TallyTick(stats, state, events);
    if (writer) writer->Record(state, events, actions);
  }
  stats.episodes = 1;
  stats.scoreless_episodes = state.score[0] == 0 && state.score[1] == 0;
  return stats;
}

// Exchanges the Home and Away blocks so that the other team reads as Home.
MatchStats SwapEnds(const MatchStats& s) {
  MatchStats out = s;
  for (int i = 0; i < s.k; ++i) {
    out.players[static_cast<std::size_t>(i)] = s.players[static_cast<std::size_t>(s.k + i)];
    out.players[static_cast<std::size_t>(s.k + i)] = s.players[static_cast<std::size_t>(i)];
  }
  return out;
}

template <typename EpisodeFn>
MatchStats RunAll(int k, int episodes, bool parallel, EpisodeFn&& fn) {
  if (episodes < 1) throw ArgumentError("evaluation needs >= 1 episode");
  std::vector<MatchStats> per(static_cast<std::size_t>(episodes));
  if (parallel) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int e = 0; e < episodes; ++e) {
      try {
        per[static_cast<std::size_t>(e)] = fn(e);
      } catch (...) {
#pragma omp critical
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  } else {
    for (int e = 0; e < episodes; ++e) per[static_cast<std::size_t>(e)] = fn(e);
  }
  MatchStats total = MatchStats::Empty(k);
  for (const MatchStats& s : per) total.Merge(s);
  return total;
}

}  // namespace

std::shared_ptr<const NetworkPolicy> LoadFrozenPolicy(const std::string& path,
                                                      const GameConfig& game) {
  Checkpoint ckpt = LoadCheckpoint(path);
  if (ckpt.obs_size != ObservationSize(game.k)) {
    throw ConfigError("checkpoint " + path + ": observation size " +
                      std::to_string(ckpt.obs_size) + " does not match " +
                      std::to_string(game.k) + "v" + std::to_string(game.k) +
                      " (" + std::to_string(ObservationSize(game.k)) + ")");
  }
  if (ckpt.joint_agents != 1 || ckpt.action_count != kNumActions) {
    throw ConfigError("checkpoint " + path +
                      ": frozen slots need a single-player policy");
  }
  auto policy = std::make_shared<NetworkPolicy>();
  policy->net = std::move(ckpt.networks.front());
  return policy;
}

Lineup Lineup::Build(const GameConfig& game, const SlotAssignment& slots,
                     std::shared_ptr<const NetworkPolicy> learner) {
  ValidateSlots(game, slots, /*allow_human=*/true);
  const int k = game.k;
  Lineup lineup;
  std::map<std::string, std::shared_ptr<const NetworkPolicy>> frozen;
  Group joint;
  for (int s = 0; s < 2 * k; ++s) {
    const SlotSpec& spec = slots[static_cast<std::size_t>(s)];
    const PlayerId id = PlayerId::FromSlot(s, k);
    switch (spec.kind) {
      case SlotKind::kScripted:
        lineup.groups_.push_back(Group{{id}, spec.profile, nullptr});
        break;
      case SlotKind::kFrozen: {
        auto& policy = frozen[spec.checkpoint];
        if (!policy) policy = LoadFrozenPolicy(spec.checkpoint, game);
        lineup.groups_.push_back(Group{{id}, {}, policy});
        break;
      }
      case SlotKind::kLearner:
        if (!learner) {
          throw ConfigError(ToString(id) + ": learner slot without a policy");
        }
        if (learner->joint_agents > 1) {
          joint.players.push_back(id);
        } else {
          lineup.groups_.push_back(Group{{id}, {}, learner});
        }
        break;
      case SlotKind::kHuman:
        break;
    }
  }
  if (!joint.players.empty()) {
    if (static_cast<int>(joint.players.size()) != learner->joint_agents) {
      throw ConfigError("joint policy controls " +
                        std::to_string(learner->joint_agents) +
                        " players but " + std::to_string(joint.players.size()) +
                        " learner slots are assigned");
    }
    joint.policy = learner;
    lineup.groups_.push_back(std::move(joint));
  }
  return lineup;
}

void Lineup::Act(const GameConfig& game, const GameState& state,
                 ActionSet& actions) const {
  const int k = state.k();
  thread_local std::vector<float> obs;
  for (const Group& g : groups_) {
    if (!g.policy) {
      const PlayerId me = g.players.front();
      actions[static_cast<std::size_t>(me.Slot(k))] =
          ScriptedAction(game, state, me, g.profile);
      continue;
    }
    obs.resize(static_cast<std::size_t>(ObservationSize(k)));
    EncodeObservation(game, state, g.players.front(), obs);
    int index = rl::DqnGreedy(g.policy->net, obs);
    // Base-6 digits, first player most significant.
    for (std::size_t i = g.players.size(); i-- > 0;) {
      actions[static_cast<std::size_t>(g.players[i].Slot(k))] =
          static_cast<Action>(index % kNumActions);
      index /= kNumActions;
    }
  }
}

MatchStats MatchStats::Empty(int k) {
  MatchStats s;
  s.k = k;
  s.players.assign(static_cast<std::size_t>(2 * k), {});
  return s;
}

void MatchStats::Merge(const MatchStats& o) {
  if (o.k != k) throw ArgumentError("cannot merge stats of different k");
  episodes += o.episodes;
  scoreless_episodes += o.scoreless_episodes;
  for (std::size_t i = 0; i < players.size(); ++i) {
    players[i].goals += o.players[i].goals;
    players[i].possession_ticks += o.players[i].possession_ticks;
    players[i].own_half_possession_ticks += o.players[i].own_half_possession_ticks;
  }
}

std::int64_t MatchStats::total_goals() const {
  std::int64_t n = 0;
  for (const PlayerStats& p : players) n += p.goals;
  return n;
}

std::int64_t MatchStats::total_possession() const {
  std::int64_t n = 0;
  for (const PlayerStats& p : players) n += p.possession_ticks;
  return n;
}

double MatchStats::ScoreRate(PlayerId p) const {
  return Percent(of(p).goals, total_goals());
}

double MatchStats::PossessionShare(PlayerId p) const {
  return Percent(of(p).possession_ticks, total_possession());
}

double MatchStats::TeamScoreRate(TeamId t) const {
  std::int64_t n = 0;
  for (int i = 0; i < k; ++i) n += of({t, i}).goals;
  return Percent(n, total_goals());
}

double MatchStats::TeamPossessionShare(TeamId t) const {
  std::int64_t n = 0;
  for (int i = 0; i < k; ++i) n += of({t, i}).possession_ticks;
  return Percent(n, total_possession());
}

double MatchStats::OwnHalfPossessionShare(PlayerId p) const {
  return Percent(of(p).own_half_possession_ticks, of(p).possession_ticks);
}

double MatchStats::ScorelessShare() const {
  return Percent(scoreless_episodes, episodes);
}

void TallyTick(MatchStats& stats, const GameState& state,
               const std::vector<GameEvent>& events) {
  for (const GameEvent& e : events) {
    if (e.kind == EventKind::kGoal) {
      ++stats.players[static_cast<std::size_t>(e.player.Slot(stats.k))].goals;
    }
  }
  if (const auto owner = PossessionIndicator(state)) {
    PlayerStats& p = stats.players[static_cast<std::size_t>(owner->Slot(stats.k))];
    ++p.possession_ticks;
    if (AttackSign(owner->team) * state.player(*owner).pos.y < 0.0) {
      ++p.own_half_possession_ticks;
    }
  }
}

Json StatsToJson(const MatchStats& s) {
  Json players = Json::object();
  for (int slot = 0; slot < 2 * s.k; ++slot) {
    const PlayerId id = PlayerId::FromSlot(slot, s.k);
    const PlayerStats& p = s.of(id);
    players[ToString(id)] = Json{{"goals", p.goals},
                                 {"possession_ticks", p.possession_ticks},
                                 {"own_half_possession_ticks",
                                  p.own_half_possession_ticks},
                                 {"score_rate", s.ScoreRate(id)},
                                 {"possession", s.PossessionShare(id)}};
  }
  return Json{{"episodes", s.episodes},
              {"scoreless_episodes", s.scoreless_episodes},
              {"total_goals", s.total_goals()},
              {"players", std::move(players)}};
}

std::string FormatStatsTable(const MatchStats& s) {
  std::ostringstream out;
  out << std::left << std::setw(12) << "";
  for (int slot = 0; slot < 2 * s.k; ++slot) {
    out << std::right << std::setw(10) << ToString(PlayerId::FromSlot(slot, s.k));
  }
  out << '\n' << std::fixed << std::setprecision(1);
  out << std::left << std::setw(12) << "Score rate";
  for (int slot = 0; slot < 2 * s.k; ++slot) {
    out << std::right << std::setw(9) << s.ScoreRate(PlayerId::FromSlot(slot, s.k))
        << '%';
  }
  out << '\n' << std::left << std::setw(12) << "Possession";
  for (int slot = 0; slot < 2 * s.k; ++slot) {
    out << std::right << std::setw(9)
        << s.PossessionShare(PlayerId::FromSlot(slot, s.k)) << '%';
  }
  out << "\n(" << s.episodes << " episodes, " << s.total_goals() << " goals, "
      << s.scoreless_episodes << " scoreless)\n";
  return out.str();
}

MatchStats Evaluate(const GameConfig& game, const Lineup& lineup, int episodes,
                    std::uint64_t seed, const std::string& replay_dir) {
  return RunAll(game.k, episodes, /*parallel=*/true, [&](int e) {
    return RunEpisode(game, lineup, seed, e, replay_dir);
  });
}

MatchStats EvaluateSerial(const GameConfig& game, const Lineup& lineup,
                          int episodes, std::uint64_t seed,
                          const std::string& replay_dir) {
  return RunAll(game.k, episodes, /*parallel=*/false, [&](int e) {
    return RunEpisode(game, lineup, seed, e, replay_dir);
  });
}

MatchStats Crossplay(const GameConfig& game, const std::vector<SlotSpec>& team_a,
                     const std::vector<SlotSpec>& team_b, int episodes,
                     std::uint64_t seed) {
  const auto k = static_cast<std::size_t>(game.k);
  if (team_a.size() != k || team_b.size() != k) {
    throw ConfigError("crossplay: each team needs " + std::to_string(k) +
                      " slot specs");
  }
  SlotAssignment a_home = team_a;
  a_home.insert(a_home.end(), team_b.begin(), team_b.end());
  SlotAssignment b_home = team_b;
  b_home.insert(b_home.end(), team_a.begin(), team_a.end());
  const Lineup home = Lineup::Build(game, a_home);
  const Lineup away = Lineup::Build(game, b_home);
  return RunAll(game.k, episodes, /*parallel=*/true, [&](int e) {
    if (e % 2 == 0) return RunEpisode(game, home, seed, e, "");
    return SwapEnds(RunEpisode(game, away, seed, e, ""));
  });
}

MatchStats RecountFromReplayFiles(const std::vector<std::string>& paths) {
  MatchStats total;
  bool first = true;
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) throw ReplayError("cannot open replay log " + path);
    std::string line;
    if (!std::getline(in, line)) throw ReplayError("empty replay log " + path);
    const Json header = Json::parse(line);
    const int k = header.at("config").at("k").get<int>();
    if (first) {
      total = MatchStats::Empty(k);
      first = false;
    }
    if (k != total.k) throw ReplayError("replay logs mix team sizes");
    bool scoreless = true;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const Json frame = Json::parse(line);
      for (const Json& e : frame.at("events")) {
        if (e.at("kind") != "Goal") continue;
        const auto scorer = ParsePlayerId(e.at("player").get<std::string>());
        if (!scorer) throw ReplayError("bad scorer in " + path);
        ++total.players[static_cast<std::size_t>(scorer->Slot(k))].goals;
      }
      const Json& ball = frame.at("ball");
      if (ball.at("state") == "controlled") {
        const std::string team = ball.at("owner").at("team").get<std::string>();
        const int index = ball.at("owner").at("index").get<int>();
        const int slot = (team == "home" ? 0 : k) + index;
        const double y = frame.at("players").at(slot).at(1).get<double>();
        PlayerStats& p = total.players[static_cast<std::size_t>(slot)];
        ++p.possession_ticks;
        if ((team == "home" && y < 0.0) || (team == "away" && y > 0.0)) {
          ++p.own_half_possession_ticks;
        }
      }
      scoreless = frame.at("score").at("home").get<int>() == 0 &&
                  frame.at("score").at("away").get<int>() == 0;
    }
    ++total.episodes;
    total.scoreless_episodes += scoreless;
  }
  return total;
}

}  // namespace sts2::harness
