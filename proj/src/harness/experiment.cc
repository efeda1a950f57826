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


#include "sts2/harness/experiment.h"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace sts2::harness {
namespace {

void CheckKeys(const Json& j, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key in " + where + ": " + key);
  }
}

template <typename T>
void Take(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

std::string_view DifficultyName(Difficulty d) {
  return d == Difficulty::kEasy ? "easy" : "normal";
}

Difficulty ParseDifficulty(const std::string& s) {
  if (s == "easy") return Difficulty::kEasy;
  if (s == "normal") return Difficulty::kNormal;
  throw ConfigError("difficulty must be easy or normal, got " + s);
}

// Wraps JSON type errors into ConfigError with context.
template <typename F>
auto Guard(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ConfigError("bad value in " + where + ": " + e.what());
  }
}

}  // namespace

std::string_view SlotKindName(SlotKind kind) {
  switch (kind) {
    case SlotKind::kScripted:
      return "scripted";
    case SlotKind::kLearner:
      return "learner";
    case SlotKind::kFrozen:
      return "frozen";
    case SlotKind::kHuman:
      return "human";
  }
  return "?";
}

void ValidateSlots(const GameConfig& game, const SlotAssignment& slots,
                   bool allow_human) {
  if (static_cast<int>(slots.size()) != game.num_players()) {
    throw ConfigError("slots: expected " + std::to_string(game.num_players()) +
                      " entries, got " + std::to_string(slots.size()));
  }
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const SlotSpec& spec = slots[s];
    const std::string who =
        ToString(PlayerId::FromSlot(static_cast<int>(s), game.k));
    switch (spec.kind) {
      case SlotKind::kScripted:
        spec.profile.Validate(game);
        break;
      case SlotKind::kLearner:
        if (spec.agent.empty()) throw ConfigError(who + ": learner needs an agent id");
        break;
      case SlotKind::kFrozen:
        if (spec.checkpoint.empty()) {
          throw ConfigError(who + ": frozen slot needs a checkpoint");
        }
        break;
      case SlotKind::kHuman:
        if (!allow_human) {
          throw ConfigError(who + ": human slots need a match server");
        }
        break;
    }
  }
}

std::vector<PlayerId> LearnerSlots(const SlotAssignment& slots, int k) {
  std::vector<PlayerId> out;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (slots[s].kind == SlotKind::kLearner) {
      out.push_back(PlayerId::FromSlot(static_cast<int>(s), k));
    }
  }
  return out;
}

void ExperimentConfig::Validate() const {
  game.Validate();
  ValidateSlots(game, slots, /*allow_human=*/false);
  reward.Validate();
  dqn.Validate();
  ppo.Validate();
  if (budget == 0) throw ConfigError("budget must be > 0");
  if (eval_every > 0 && eval_episodes < 1) {
    throw ConfigError("eval_episodes must be >= 1");
  }
  if (final_eval_episodes < 0) throw ConfigError("final_eval_episodes >= 0");

  const std::vector<PlayerId> learners = LearnerSlots(slots, game.k);
  if (learners.empty()) throw ConfigError("no learner slot");
  for (PlayerId p : learners) {
    const SlotSpec& s = slots[static_cast<std::size_t>(p.Slot(game.k))];
    if (s.agent != slots[static_cast<std::size_t>(learners[0].Slot(game.k))].agent) {
      throw ConfigError("all learner slots must share one agent id");
    }
    if (p.team != learners[0].team) {
      throw ConfigError("learner slots must be on one team");
    }
  }
  if (centralized && learners.size() < 2) {
    throw ConfigError("centralized control needs >= 2 learner slots");
  }
  if (!centralized && learners.size() != 1) {
    throw ConfigError("exactly one learner slot unless centralized");
  }

  for (std::size_t i = 0; i < curriculum.size(); ++i) {
    const CurriculumStage& st = curriculum[i];
    const std::string where = "curriculum stage " + std::to_string(i);
    if (st.name.empty()) throw ConfigError(where + ": name required");
    GameConfig g = StageGame(*this, static_cast<int>(i));
    g.Validate();
    if (g.k != game.k) throw ConfigError(where + ": cannot change k");
    if (i + 1 < curriculum.size() && !st.advance_when) {
      throw ConfigError(where + ": advance_when required before the last stage");
    }
    if (st.advance_when) {
      const AdvanceRule& r = *st.advance_when;
      if (r.kind == AdvanceRule::Kind::kSteps && r.steps == 0) {
        throw ConfigError(where + ": advance steps must be > 0");
      }
      if (r.kind == AdvanceRule::Kind::kEvalScoreRateAtLeast) {
        if (!(r.score_rate >= 0.0 && r.score_rate <= 100.0)) {
          throw ConfigError(where + ": score rate threshold in [0, 100]");
        }
        if (eval_every == 0) {
          throw ConfigError(where + ": score-rate advance needs eval_every > 0");
        }
      }
    }
  }
}

GameConfig StageGame(const ExperimentConfig& config, int stage) {
  GameConfig g = config.game;
  if (stage >= 0 && stage < static_cast<int>(config.curriculum.size())) {
    ConfigFromJson(config.curriculum[static_cast<std::size_t>(stage)].game_overrides, g);
  }
  return g;
}

SlotAssignment StageSlots(const ExperimentConfig& config, int stage) {
  SlotAssignment slots = config.slots;
  if (stage < 0 || stage >= static_cast<int>(config.curriculum.size())) {
    return slots;
  }
  const auto& diff =
      config.curriculum[static_cast<std::size_t>(stage)].opponent_difficulty;
  if (!diff) return slots;
  const std::vector<PlayerId> learners = LearnerSlots(slots, config.game.k);
  const TeamId them = Opponent(learners.empty() ? TeamId::kHome : learners[0].team);
  for (int i = 0; i < config.game.k; ++i) {
    SlotSpec& s = slots[static_cast<std::size_t>(PlayerId{them, i}.Slot(config.game.k))];
    if (s.kind == SlotKind::kScripted) s.profile.difficulty = *diff;
  }
  return slots;
}

Json ProfileToJson(const ScriptedProfile& p) {
  return Json{{"shoot_range", p.shoot_range},
              {"open_lane_clearance", p.open_lane_clearance},
              {"support_offset", {p.support_offset.x, p.support_offset.y}},
              {"defend_depth", p.defend_depth},
              {"difficulty", DifficultyName(p.difficulty)}};
}

void ProfileFromJson(const Json& j, ScriptedProfile& p) {
  CheckKeys(j,
            {"shoot_range", "open_lane_clearance", "support_offset",
             "defend_depth", "difficulty"},
            "profile");
  Guard("profile", [&] {
    Take(j, "shoot_range", p.shoot_range);
    Take(j, "open_lane_clearance", p.open_lane_clearance);
    Take(j, "defend_depth", p.defend_depth);
    if (j.contains("support_offset")) {
      const Json& o = j.at("support_offset");
      if (!o.is_array() || o.size() != 2) {
        throw ConfigError("profile.support_offset must be [x, y]");
      }
      p.support_offset = {o[0].get<double>(), o[1].get<double>()};
    }
    if (j.contains("difficulty")) {
      p.difficulty = ParseDifficulty(j.at("difficulty").get<std::string>());
    }
    return 0;
  });
}

Json RewardToJson(const RewardSpec& r) {
  return Json{
      {"score_reward", r.score_reward},
      {"concede_reward", r.concede_reward},
      {"possession_gain", r.possession_gain},
      {"possession_loss", r.possession_loss},
      {"possession_scope",
       r.possession_scope == PossessionScope::kTeam ? "team" : "individual"},
      {"teammate_loss_penalty", r.teammate_loss_penalty},
      {"exclude_within_team_passes", r.exclude_within_team_passes},
      {"reward_loose_pickups", r.reward_loose_pickups},
  };
}

RewardSpec RewardFromJson(const Json& j) {
  CheckKeys(j,
            {"preset", "score_reward", "concede_reward", "possession_gain",
             "possession_loss", "possession_scope", "teammate_loss_penalty",
             "exclude_within_team_passes", "reward_loose_pickups"},
            "reward");
  return Guard("reward", [&] {
    RewardSpec r;
    if (j.contains("preset")) {
      const std::string name = j.at("preset").get<std::string>();
      const auto preset = ParseRewardPreset(name);
      if (!preset) throw ConfigError("unknown reward preset: " + name);
      r = MakeRewardSpec(*preset);
    }
    Take(j, "score_reward", r.score_reward);
    Take(j, "concede_reward", r.concede_reward);
    Take(j, "possession_gain", r.possession_gain);
    Take(j, "possession_loss", r.possession_loss);
    Take(j, "teammate_loss_penalty", r.teammate_loss_penalty);
    Take(j, "exclude_within_team_passes", r.exclude_within_team_passes);
    Take(j, "reward_loose_pickups", r.reward_loose_pickups);
    if (j.contains("possession_scope")) {
      const std::string s = j.at("possession_scope").get<std::string>();
      if (s == "team") {
        r.possession_scope = PossessionScope::kTeam;
      } else if (s == "individual") {
        r.possession_scope = PossessionScope::kIndividual;
      } else {
        throw ConfigError("possession_scope must be individual or team");
      }
    }
    return r;
  });
}

Json DqnToJson(const rl::DqnConfig& c) {
  return Json{{"hidden", c.hidden},
              {"learning_rate", c.learning_rate},
              {"gamma", c.gamma},
              {"epsilon_start", c.epsilon_start},
              {"epsilon_end", c.epsilon_end},
              {"epsilon_decay_steps", c.epsilon_decay_steps},
              {"target_sync_interval", c.target_sync_interval},
              {"batch_size", c.batch_size},
              {"replay_capacity", c.replay_capacity},
              {"learn_every", c.learn_every},
              {"learning_starts", c.learning_starts},
              {"huber", c.huber},
              {"max_grad_norm", c.max_grad_norm}};
}

void DqnFromJson(const Json& j, rl::DqnConfig& c) {
  CheckKeys(j,
            {"hidden", "learning_rate", "gamma", "epsilon_start", "epsilon_end",
             "epsilon_decay_steps", "target_sync_interval", "batch_size",
             "replay_capacity", "learn_every", "learning_starts", "huber",
             "max_grad_norm"},
            "dqn");
  Guard("dqn", [&] {
    Take(j, "hidden", c.hidden);
    Take(j, "learning_rate", c.learning_rate);
    Take(j, "gamma", c.gamma);
    Take(j, "epsilon_start", c.epsilon_start);
    Take(j, "epsilon_end", c.epsilon_end);
    Take(j, "epsilon_decay_steps", c.epsilon_decay_steps);
    Take(j, "target_sync_interval", c.target_sync_interval);
    Take(j, "batch_size", c.batch_size);
    Take(j, "replay_capacity", c.replay_capacity);
    Take(j, "learn_every", c.learn_every);
    Take(j, "learning_starts", c.learning_starts);
    Take(j, "huber", c.huber);
    Take(j, "max_grad_norm", c.max_grad_norm);
    return 0;
  });
}

Json PpoToJson(const rl::PpoConfig& c) {
  return Json{{"hidden", c.hidden},
              {"learning_rate", c.learning_rate},
              {"clip_ratio", c.clip_ratio},
              {"gae_lambda", c.gae_lambda},
              {"gamma", c.gamma},
              {"epochs_per_update", c.epochs_per_update},
              {"minibatch_size", c.minibatch_size},
              {"entropy_coef", c.entropy_coef},
              {"rollout_length", c.rollout_length},
              {"value_coef", c.value_coef},
              {"max_grad_norm", c.max_grad_norm},
              {"normalize_advantages", c.normalize_advantages}};
}

void PpoFromJson(const Json& j, rl::PpoConfig& c) {
  CheckKeys(j,
            {"hidden", "learning_rate", "clip_ratio", "gae_lambda", "gamma",
             "epochs_per_update", "minibatch_size", "entropy_coef",
             "rollout_length", "value_coef", "max_grad_norm",
             "normalize_advantages"},
            "ppo");
  Guard("ppo", [&] {
    Take(j, "hidden", c.hidden);
    Take(j, "learning_rate", c.learning_rate);
    Take(j, "clip_ratio", c.clip_ratio);
    Take(j, "gae_lambda", c.gae_lambda);
    Take(j, "gamma", c.gamma);
    Take(j, "epochs_per_update", c.epochs_per_update);
    Take(j, "minibatch_size", c.minibatch_size);
    Take(j, "entropy_coef", c.entropy_coef);
    Take(j, "rollout_length", c.rollout_length);
    Take(j, "value_coef", c.value_coef);
    Take(j, "max_grad_norm", c.max_grad_norm);
    Take(j, "normalize_advantages", c.normalize_advantages);
    return 0;
  });
}

Json SlotsToJson(const SlotAssignment& slots, int k) {
  Json out = Json::array();
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const SlotSpec& spec = slots[s];
    Json j{{"player", ToString(PlayerId::FromSlot(static_cast<int>(s), k))},
           {"kind", SlotKindName(spec.kind)}};
    if (spec.kind == SlotKind::kScripted) j["profile"] = ProfileToJson(spec.profile);
    if (spec.kind == SlotKind::kLearner) j["agent"] = spec.agent;
    if (spec.kind == SlotKind::kFrozen) j["checkpoint"] = spec.checkpoint;
    out.push_back(std::move(j));
  }
  return out;
}

SlotAssignment SlotsFromJson(const Json& j, int k) {
  if (!j.is_array()) throw ConfigError("slots must be an array");
  SlotAssignment slots(static_cast<std::size_t>(2 * k));
  std::vector<bool> seen(slots.size(), false);
  for (const Json& e : j) {
    CheckKeys(e, {"player", "kind", "profile", "agent", "checkpoint"}, "slot");
    Guard("slot", [&] {
      const std::string who = e.at("player").get<std::string>();
      const auto id = ParsePlayerId(who);
      if (!id || id->index < 0 || id->index >= k) {
        throw ConfigError("slot: unknown player " + who);
      }
      const auto s = static_cast<std::size_t>(id->Slot(k));
      if (seen[s]) throw ConfigError("slot assigned twice: " + who);
      seen[s] = true;
      const std::string kind = e.at("kind").get<std::string>();
      SlotSpec& spec = slots[s];
      if (kind == "scripted") {
        spec = SlotSpec::Scripted();
        if (e.contains("profile")) ProfileFromJson(e.at("profile"), spec.profile);
      } else if (kind == "learner") {
        spec = SlotSpec::Learner(e.value("agent", std::string("learner")));
      } else if (kind == "frozen") {
        spec = SlotSpec::Frozen(e.at("checkpoint").get<std::string>());
      } else if (kind == "human") {
        spec = SlotSpec::Human();
      } else {
        throw ConfigError("slot kind must be scripted|learner|frozen|human, got " +
                          kind);
      }
      return 0;
    });
  }
  for (std::size_t s = 0; s < seen.size(); ++s) {
    if (!seen[s]) {
      throw ConfigError("slot not assigned: " +
                        ToString(PlayerId::FromSlot(static_cast<int>(s), k)));
    }
  }
  return slots;
}

Json ExperimentToJson(const ExperimentConfig& c) {
  Json stages = Json::array();
  for (const CurriculumStage& st : c.curriculum) {
    Json j{{"name", st.name}, {"game", st.game_overrides}};
    if (st.opponent_difficulty) {
      j["opponent_difficulty"] = DifficultyName(*st.opponent_difficulty);
    }
    if (st.advance_when) {
      if (st.advance_when->kind == AdvanceRule::Kind::kSteps) {
        j["advance_when"] = Json{{"steps", st.advance_when->steps}};
      } else {
        j["advance_when"] =
            Json{{"eval_score_rate_at_least", st.advance_when->score_rate}};
      }
    }
    stages.push_back(std::move(j));
  }
  return Json{{"name", c.name},
              {"seed", c.seed},
              {"game", ConfigToJson(c.game)},
              {"slots", SlotsToJson(c.slots, c.game.k)},
              {"reward", RewardToJson(c.reward)},
              {"algo", AlgoName(c.algo)},
              {"dqn", DqnToJson(c.dqn)},
              {"ppo", PpoToJson(c.ppo)},
              {"centralized", c.centralized},
              {"curriculum", stages},
              {"budget", c.budget},
              {"eval_every", c.eval_every},
              {"eval_episodes", c.eval_episodes},
              {"final_eval_episodes", c.final_eval_episodes}};
}

ExperimentConfig ExperimentFromJson(const Json& j) {
  CheckKeys(j,
            {"name", "seed", "game", "slots", "reward", "algo", "dqn", "ppo",
             "centralized", "curriculum", "budget", "eval_every",
             "eval_episodes", "final_eval_episodes"},
            "experiment");
  ExperimentConfig c;
  Guard("experiment", [&] {
    Take(j, "name", c.name);
    Take(j, "seed", c.seed);
    if (j.contains("game")) ConfigFromJson(j.at("game"), c.game);
    if (!j.contains("slots")) throw ConfigError("experiment: slots required");
    c.slots = SlotsFromJson(j.at("slots"), c.game.k);
    if (j.contains("reward")) c.reward = RewardFromJson(j.at("reward"));
    if (j.contains("algo")) {
      const std::string a = j.at("algo").get<std::string>();
      if (a == "dqn") {
        c.algo = Algo::kDqn;
      } else if (a == "ppo") {
        c.algo = Algo::kPpo;
      } else {
        throw ConfigError("algo must be dqn or ppo, got " + a);
      }
    }
    if (j.contains("dqn")) DqnFromJson(j.at("dqn"), c.dqn);
    if (j.contains("ppo")) PpoFromJson(j.at("ppo"), c.ppo);
    Take(j, "centralized", c.centralized);
    Take(j, "budget", c.budget);
    Take(j, "eval_every", c.eval_every);
    Take(j, "eval_episodes", c.eval_episodes);
    Take(j, "final_eval_episodes", c.final_eval_episodes);
    if (j.contains("curriculum")) {
      const Json& cur = j.at("curriculum");
      if (!cur.is_array()) throw ConfigError("curriculum must be an array");
      for (const Json& s : cur) {
        CheckKeys(s, {"name", "game", "opponent_difficulty", "advance_when"},
                  "curriculum stage");
        CurriculumStage st;
        st.name = s.value("name", std::string());
        if (s.contains("game")) {
          GameConfig probe;
          ConfigFromJson(s.at("game"), probe);  // rejects unknown keys
          st.game_overrides = s.at("game");
        }
        if (s.contains("opponent_difficulty")) {
          st.opponent_difficulty =
              ParseDifficulty(s.at("opponent_difficulty").get<std::string>());
        }
        if (s.contains("advance_when")) {
          const Json& a = s.at("advance_when");
          CheckKeys(a, {"steps", "eval_score_rate_at_least"}, "advance_when");
          if (a.size() != 1) {
            throw ConfigError("advance_when needs exactly one criterion");
          }
          AdvanceRule rule;
          if (a.contains("steps")) {
            rule.kind = AdvanceRule::Kind::kSteps;
            rule.steps = a.at("steps").get<std::uint64_t>();
          } else {
            rule.kind = AdvanceRule::Kind::kEvalScoreRateAtLeast;
            rule.score_rate = a.at("eval_score_rate_at_least").get<double>();
          }
          st.advance_when = rule;
        }
        c.curriculum.push_back(std::move(st));
      }
    }
    return 0;
  });
  c.Validate();
  return c;
}

ExperimentConfig LoadExperiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read experiment file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("experiment file " + path + ": " + e.what());
  }
  return ExperimentFromJson(j);
}

std::uint64_t ExperimentHash(const ExperimentConfig& config) {
  return Fnv1a64(ExperimentToJson(config).dump());
}

}  // namespace sts2::harness
