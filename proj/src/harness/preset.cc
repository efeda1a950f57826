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


#include "sts2/harness/preset.h"

#include <filesystem>

namespace sts2::harness {
namespace {

struct PresetDef {
  const char* name;
  const char* description;
};

constexpr PresetDef kPresets[] = {
    {"EXP-T1", "1v1 DQN vs scripted AI, sparse +/-1 scoring reward"},
    {"EXP-T2", "1v1 DQN vs scripted AI, scoring + individual +/-0.8 possession"},
    {"EXP-T3", "1v1 PPO vs the frozen EXP-T2 DQN, same reward"},
    {"EXP-PPO-LOCALMIN",
     "1v1 PPO vs scripted AI, scoring + possession; converges to holding the "
     "ball in its own half"},
    {"EXP-T4", "2v2 single DQN with a scripted teammate, individual possession"},
    {"EXP-T4b", "2v2 single DQN with a scripted teammate, team possession"},
    {"EXP-T5",
     "2v2 single DQN with a scripted teammate, individual possession + "
     "-0.8 teammate-loss penalty"},
    {"EXP-T6",
     "2v2 second DQN beside the frozen EXP-T4 DQN, individual possession"},
    {"EXP-T4-PPO", "PPO counterpart of EXP-T4"},
    {"EXP-T6-PPO", "PPO counterpart of EXP-T6, beside the frozen EXP-T4-PPO"},
    {"EXP-CROSS", "cross-play: EXP-T4-PPO + EXP-T6-PPO team vs EXP-T4 + EXP-T6"},
    {"EXP-CENTRAL",
     "2v2 centralized DQN controlling both home players (36 joint actions), "
     "team possession"},
};

const PresetDef& Find(const std::string& name) {
  for (const PresetDef& d : kPresets) {
    if (name == d.name) return d;
  }
  std::string known;
  for (const PresetDef& d : kPresets) known += std::string(" ") + d.name;
  throw ConfigError("unknown preset " + name + "; known:" + known);
}

std::string CheckpointFor(const std::string& dep, const PresetOptions& options,
                          const std::string& dir) {
  const auto it = options.checkpoints.find(dep);
  if (it != options.checkpoints.end()) return it->second;
  return (std::filesystem::path(dir) / dep / "final.ckpt").string();
}

ExperimentConfig Base(const std::string& name, int k, Algo algo,
                      RewardPreset reward) {
  ExperimentConfig c;
  c.name = name;
  c.game.k = k;
  c.game.randomize_start = true;
  c.algo = algo;
  c.reward = MakeRewardSpec(reward);
  c.slots.assign(static_cast<std::size_t>(2 * k), SlotSpec::Scripted());
  c.slots[0] = SlotSpec::Learner();
  c.eval_episodes = 20;
  c.final_eval_episodes = 500;
  if (algo == Algo::kDqn) {
    c.budget = k == 1 ? 1500000 : 2000000;
    c.eval_every = 250000;
  } else {
    c.budget = 1000000;
    c.eval_every = 100000;
  }
  return c;
}

}  // namespace

const std::vector<std::string>& PresetNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const PresetDef& d : kPresets) out.push_back(d.name);
    return out;
  }();
  return names;
}

std::string PresetDescription(const std::string& name) {
  return Find(name).description;
}

std::vector<std::string> PresetDependencies(const std::string& name) {
  Find(name);
  if (name == "EXP-T3") return {"EXP-T2"};
  if (name == "EXP-T6") return {"EXP-T4"};
  if (name == "EXP-T6-PPO") return {"EXP-T4-PPO"};
  if (name == "EXP-CROSS") {
    return {"EXP-T4", "EXP-T6", "EXP-T4-PPO", "EXP-T6-PPO"};
  }
  return {};
}

ExperimentConfig PresetExperiment(const std::string& name,
                                  const PresetOptions& options,
                                  const std::string& dir) {
  Find(name);
  ExperimentConfig c;
  if (name == "EXP-T1") {
    c = Base(name, 1, Algo::kDqn, RewardPreset::kSparse);
  } else if (name == "EXP-T2") {
    c = Base(name, 1, Algo::kDqn, RewardPreset::kIndividualPossession);
  } else if (name == "EXP-T3") {
    c = Base(name, 1, Algo::kPpo, RewardPreset::kIndividualPossession);
    c.slots[1] = SlotSpec::Frozen(CheckpointFor("EXP-T2", options, dir));
  } else if (name == "EXP-PPO-LOCALMIN") {
    c = Base(name, 1, Algo::kPpo, RewardPreset::kIndividualPossession);
    // Faceoff starts. With random layouts the scripted side nearly always wins
    // the opening loose ball and scores once, hiding the holding behaviour.
    // The faceoff race is learned around 1.8M steps.
    c.game.randomize_start = false;
    c.budget = 3000000;
    c.eval_every = 250000;
  } else if (name == "EXP-T4" || name == "EXP-T4-PPO") {
    c = Base(name, 2, name == "EXP-T4" ? Algo::kDqn : Algo::kPpo,
             RewardPreset::kIndividualPossession);
  } else if (name == "EXP-T4b") {
    c = Base(name, 2, Algo::kDqn, RewardPreset::kTeamPossession);
  } else if (name == "EXP-T5") {
    c = Base(name, 2, Algo::kDqn, RewardPreset::kTeammateAssist);
  } else if (name == "EXP-T6" || name == "EXP-T6-PPO") {
    const bool dqn = name == "EXP-T6";
    c = Base(name, 2, dqn ? Algo::kDqn : Algo::kPpo,
             RewardPreset::kIndividualPossession);
    c.slots[0] = SlotSpec::Frozen(
        CheckpointFor(dqn ? "EXP-T4" : "EXP-T4-PPO", options, dir));
    c.slots[1] = SlotSpec::Learner();
  } else if (name == "EXP-CENTRAL") {
    c = Base(name, 2, Algo::kDqn, RewardPreset::kCentralizedTeam);
    c.slots[1] = SlotSpec::Learner();
    c.centralized = true;
    c.budget = 1000000;
  } else {
    throw ConfigError(name + " is a cross-play preset without a training run");
  }
  c.seed = options.seed;
  if (options.budget) c.budget = *options.budget;
  if (options.final_eval_episodes) c.final_eval_episodes = *options.final_eval_episodes;
  if (options.eval_episodes) c.eval_episodes = *options.eval_episodes;
  if (options.eval_every) c.eval_every = *options.eval_every;
  c.Validate();
  return c;
}

PresetResult RunPreset(const std::string& name, const std::string& out_dir,
                       const PresetOptions& options,
                       const std::function<void(const std::string&)>& progress) {
  Find(name);
  PresetResult out;
  auto train = [&](const std::string& preset) {
    TrainOptions topt;
    topt.out_dir = (std::filesystem::path(out_dir) / preset).string();
    if (progress) {
      topt.progress = [&](const std::string& line) {
        progress(preset + " " + line);
      };
    }
    out.runs.push_back(
        {preset, Train(PresetExperiment(preset, options, out_dir), topt)});
  };
  for (const std::string& dep : PresetDependencies(name)) {
    const std::string path = CheckpointFor(dep, options, out_dir);
    if (std::filesystem::exists(path)) {
      if (progress) progress("reusing " + path);
      continue;
    }
    train(dep);
  }

  if (name == "EXP-CROSS") {
    const std::vector<SlotSpec> ppo{
        SlotSpec::Frozen(CheckpointFor("EXP-T4-PPO", options, out_dir)),
        SlotSpec::Frozen(CheckpointFor("EXP-T6-PPO", options, out_dir))};
    const std::vector<SlotSpec> dqn{
        SlotSpec::Frozen(CheckpointFor("EXP-T4", options, out_dir)),
        SlotSpec::Frozen(CheckpointFor("EXP-T6", options, out_dir))};
    GameConfig game;
    game.k = 2;
    game.randomize_start = true;
    out.stats = Crossplay(game, ppo, dqn,
                          options.final_eval_episodes.value_or(500),
                          DeriveSeed(options.seed, 999));
  } else {
    train(name);
    out.stats = out.runs.back().result.final_eval;
  }
  out.table = FormatStatsTable(out.stats);
  return out;
}

}  // namespace sts2::harness
