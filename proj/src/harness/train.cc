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


#include "sts2/harness/train.h"

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "sts2/rewards.h"
#include "sts2/rl/dqn.h"
#include "sts2/rl/joint_action.h"
#include "sts2/rl/ppo.h"

namespace sts2::harness {
namespace {

// Uniform interface over the two learning algorithms.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual int Act(std::span<const float> obs) = 0;
  virtual void Observe(std::span<const float> obs, int action, double reward,
                       std::span<const float> next_obs, bool done) = 0;
  // The episode ended between two decisions; the last transition is terminal.
  virtual void EndEpisode() = 0;
  virtual std::shared_ptr<const NetworkPolicy> Snapshot(int joint) const = 0;
  virtual Checkpoint Save(int joint, std::uint64_t hash) const = 0;
  // Loss statistics since the previous call.
  virtual Json TakeSummary() = 0;
  virtual std::uint64_t env_steps() const = 0;
};

class DqnLearner : public Learner {
 public:
  DqnLearner(int obs_size, int actions, const rl::DqnConfig& config,
             std::uint64_t seed)
      : agent_(rl::MakeDqnAgent(obs_size, actions, config, DeriveSeed(seed, 1))),
        rng_(DeriveSeed(seed, 2)) {}

  int Act(std::span<const float> obs) override {
    return rl::DqnAct(agent_, obs, rng_);
  }

  void Observe(std::span<const float> obs, int action, double reward,
               std::span<const float> next_obs, bool done) override {
    agent_.replay.Add(obs, action, reward, next_obs, done);
    const std::uint64_t t = ++agent_.env_steps;
    const rl::DqnConfig& c = agent_.config;
    if (t >= c.learning_starts && t % static_cast<std::uint64_t>(c.learn_every) == 0) {
      const auto batch =
          agent_.replay.Sample(static_cast<std::size_t>(c.batch_size), rng_);
      loss_sum_ += rl::DqnLearn(agent_, batch);
      ++loss_count_;
    }
    if (t % c.target_sync_interval == 0) rl::DqnSyncTarget(agent_);
  }

  void EndEpisode() override { agent_.replay.MarkLastDone(); }

  std::shared_ptr<const NetworkPolicy> Snapshot(int joint) const override {
    return std::make_shared<NetworkPolicy>(NetworkPolicy{agent_.online, joint});
  }

  Checkpoint Save(int joint, std::uint64_t hash) const override {
    return CheckpointFromDqn(agent_, joint, hash);
  }

  Json TakeSummary() override {
    Json j{{"loss", loss_count_ ? loss_sum_ / loss_count_ : 0.0},
           {"learn_steps", agent_.learn_steps},
           {"epsilon", rl::Epsilon(agent_.config, agent_.env_steps)}};
    loss_sum_ = 0.0;
    loss_count_ = 0;
    return j;
  }

  std::uint64_t env_steps() const override { return agent_.env_steps; }

 private:
  rl::DqnAgent agent_;
  CounterRng rng_;
  double loss_sum_ = 0.0;
  std::uint64_t loss_count_ = 0;
};

class PpoLearner : public Learner {
 public:
  PpoLearner(int obs_size, int actions, const rl::PpoConfig& config,
             std::uint64_t seed)
      : agent_(rl::MakePpoAgent(obs_size, actions, config, DeriveSeed(seed, 1))),
        rng_(DeriveSeed(seed, 2)) {
    rollout_.obs_size = obs_size;
  }

  int Act(std::span<const float> obs) override {
    const rl::PolicySample s = rl::PpoPolicy(agent_, obs, rng_);
    last_ = s;
    return s.action;
  }

  void Observe(std::span<const float> obs, int action, double reward,
               std::span<const float> next_obs, bool done) override {
    rollout_.obs.insert(rollout_.obs.end(), obs.begin(), obs.end());
    rollout_.actions.push_back(action);
    rollout_.log_probs.push_back(last_.log_prob);
    values_.push_back(last_.value);
    rewards_.push_back(reward);
    dones_.push_back(done ? 1 : 0);
    ++agent_.env_steps;
    if (static_cast<int>(rewards_.size()) >= agent_.config.rollout_length) {
      Update(done ? 0.0 : rl::PpoValue(agent_, next_obs));
    }
  }

  void EndEpisode() override {
    if (!dones_.empty()) dones_.back() = 1;
  }

  std::shared_ptr<const NetworkPolicy> Snapshot(int joint) const override {
    return std::make_shared<NetworkPolicy>(NetworkPolicy{agent_.policy, joint});
  }

  Checkpoint Save(int joint, std::uint64_t hash) const override {
    return CheckpointFromPpo(agent_, joint, hash);
  }

  Json TakeSummary() override {
    const double n = updates_ > 0 ? static_cast<double>(updates_) : 1.0;
    Json j{{"policy_loss", sum_.policy_loss / n},
           {"value_loss", sum_.value_loss / n},
           {"entropy", sum_.entropy / n},
           {"clip_fraction", sum_.clip_fraction / n},
           {"updates", agent_.updates}};
    sum_ = {};
    updates_ = 0;
    return j;
  }

  std::uint64_t env_steps() const override { return agent_.env_steps; }

 private:
  void Update(double bootstrap) {
    std::vector<double> values = values_;
    values.push_back(bootstrap);
    rl::GaeResult gae =
        rl::ComputeGae(rewards_, values, dones_, agent_.config.gamma,
                       agent_.config.gae_lambda);
    rollout_.advantages = std::move(gae.advantages);
    rollout_.returns = std::move(gae.returns);
    const rl::PpoDiagnostics d = rl::PpoUpdate(agent_, rollout_, rng_);
    sum_.policy_loss += d.policy_loss;
    sum_.value_loss += d.value_loss;
    sum_.entropy += d.entropy;
    sum_.clip_fraction += d.clip_fraction;
    ++updates_;
    const int obs_size = rollout_.obs_size;
    rollout_ = rl::Rollout{};
    rollout_.obs_size = obs_size;
    values_.clear();
    rewards_.clear();
    dones_.clear();
  }

  rl::PpoAgent agent_;
  CounterRng rng_;
  rl::PolicySample last_;
  rl::Rollout rollout_;
  std::vector<double> values_;
  std::vector<double> rewards_;
  std::vector<std::uint8_t> dones_;
  rl::PpoDiagnostics sum_;
  int updates_ = 0;
};

int LastStage(const ExperimentConfig& c) {
  return static_cast<int>(c.curriculum.size()) - 1;
}

std::string StageName(const ExperimentConfig& c, int stage) {
  if (stage < 0 || stage >= static_cast<int>(c.curriculum.size())) return "";
  return c.curriculum[static_cast<std::size_t>(stage)].name;
}

// Learner slots become Human so that the lineup leaves them to the agent.
SlotAssignment WithoutLearners(SlotAssignment slots) {
  for (SlotSpec& s : slots) {
    if (s.kind == SlotKind::kLearner) s = SlotSpec::Human();
  }
  return slots;
}

}  // namespace

double LearnerScoreRate(const MatchStats& stats, TeamId team) {
  return stats.TeamScoreRate(team);
}

TrainResult Train(const ExperimentConfig& config, const TrainOptions& options) {
  config.Validate();
  const int k = config.game.k;
  const std::vector<PlayerId> learners = LearnerSlots(config.slots, k);
  const PlayerId viewer = learners.front();
  const int joint = config.centralized ? static_cast<int>(learners.size()) : 1;
  const rl::JointActionCodec codec(config.centralized ? learners
                                                      : std::vector{viewer});
  const int obs_size = ObservationSize(k);
  const std::uint64_t hash = ExperimentHash(config);

  std::unique_ptr<Learner> learner;
  if (config.algo == Algo::kDqn) {
    learner = std::make_unique<DqnLearner>(obs_size, codec.joint_count(),
                                           config.dqn, config.seed);
  } else {
    learner = std::make_unique<PpoLearner>(obs_size, codec.joint_count(),
                                           config.ppo, config.seed);
  }

  std::ofstream metrics_file;
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(options.out_dir);
    std::ofstream(options.out_dir + "/experiment.json")
        << ExperimentToJson(config).dump(2) << '\n';
    metrics_file.open(options.out_dir + "/metrics.ndjson", std::ios::trunc);
    if (!metrics_file) throw ConfigError("cannot write to " + options.out_dir);
  }

  TrainResult result;
  int stage = config.curriculum.empty() ? -1 : 0;
  bool advance_pending = false;
  std::uint64_t stage_start = 0;
  GameConfig game = StageGame(config, stage);
  Lineup others = Lineup::Build(game, WithoutLearners(StageSlots(config, stage)));

  const std::uint64_t game_seed = DeriveSeed(config.seed, 3);
  std::uint64_t episode = 0;
  auto start_episode = [&]() {
    GameConfig g = game;
    g.seed = DeriveSeed(game_seed, episode);
    return NewMatch(g);
  };
  GameState state = start_episode();

  ActionSet actions(static_cast<std::size_t>(2 * k));
  std::vector<GameEvent> events;
  std::vector<float> obs(static_cast<std::size_t>(obs_size));
  std::vector<float> next_obs(obs.size());
  double episode_return = 0.0;
  double return_sum = 0.0;
  std::uint64_t returns_counted = 0;
  int eval_index = 0;

  auto record = [&](const MatchStats* stats, bool final) {
    Json j{{"step", learner->env_steps()},
           {"episodes", episode},
           {"stage", std::max(stage, 0)},
           {"stage_name", StageName(config, stage)},
           {"train", learner->TakeSummary()},
           {"train_return",
            returns_counted ? return_sum / static_cast<double>(returns_counted)
                            : 0.0},
           {"final", final}};
    return_sum = 0.0;
    returns_counted = 0;
    if (stats) {
      j["eval"] = StatsToJson(*stats);
      j["learner_score_rate"] = stats->TeamScoreRate(viewer.team);
      j["learner_possession"] = stats->TeamPossessionShare(viewer.team);
    }
    const std::string line = j.dump();
    result.metrics.push_back(line);
    if (metrics_file) metrics_file << line << '\n' << std::flush;
    if (options.progress) options.progress(line);
  };

  auto evaluate = [&](const GameConfig& g, int st, int episodes,
                      std::uint64_t seed) {
    const Lineup lineup =
        Lineup::Build(g, StageSlots(config, st), learner->Snapshot(joint));
    return Evaluate(g, lineup, episodes, seed);
  };

  auto current_rule = [&]() -> const AdvanceRule* {
    if (stage < 0 || stage >= LastStage(config)) return nullptr;
    const auto& rule = config.curriculum[static_cast<std::size_t>(stage)].advance_when;
    return rule ? &*rule : nullptr;
  };

  while (learner->env_steps() < config.budget) {
    if (state.phase.kind == PhaseKind::kFinished) {
      return_sum += episode_return;
      ++returns_counted;
      episode_return = 0.0;
      if (advance_pending) {
        ++stage;
        advance_pending = false;
        stage_start = learner->env_steps();
        game = StageGame(config, stage);
        others = Lineup::Build(game, WithoutLearners(StageSlots(config, stage)));
      }
      ++episode;
      state = start_episode();
    }
    std::fill(actions.begin(), actions.end(), std::nullopt);
    others.Act(game, state, actions);
    const bool decide = state.phase.kind == PhaseKind::kPlay;
    int a = 0;
    if (decide) {
      EncodeObservation(game, state, viewer, obs);
      a = learner->Act(obs);
      const std::vector<Action> decoded = codec.Decode(a);
      for (std::size_t i = 0; i < decoded.size(); ++i) {
        actions[static_cast<std::size_t>(codec.agents()[i].Slot(k))] = decoded[i];
      }
    }
    StepInPlace(game, state, actions, events);
    const bool done = state.phase.kind == PhaseKind::kFinished;
    if (!decide) {
      if (done) learner->EndEpisode();
      continue;
    }

    double r = 0.0;
    for (PlayerId p : codec.agents()) r += RewardFor(events, p, config.reward);
    r /= static_cast<double>(codec.agents().size());
    episode_return += r;
    EncodeObservation(game, state, viewer, next_obs);
    learner->Observe(obs, a, r, next_obs, done);

    const std::uint64_t t = learner->env_steps();
    if (const AdvanceRule* rule = current_rule();
        rule && rule->kind == AdvanceRule::Kind::kSteps &&
        t - stage_start >= rule->steps) {
      advance_pending = true;
    }
    if (config.eval_every > 0 && t % config.eval_every == 0 && t < config.budget) {
      const MatchStats stats =
          evaluate(game, stage, config.eval_episodes,
                   DeriveSeed(config.seed, 1000 + static_cast<std::uint64_t>(eval_index++)));
      record(&stats, false);
      if (!options.out_dir.empty()) {
        SaveCheckpoint(options.out_dir + "/step_" + std::to_string(t) + ".ckpt",
                       learner->Save(joint, hash));
      }
      if (const AdvanceRule* rule = current_rule();
          rule && rule->kind == AdvanceRule::Kind::kEvalScoreRateAtLeast &&
          stats.TeamScoreRate(viewer.team) >= rule->score_rate) {
        advance_pending = true;
      }
    }
  }

  result.final_stage = std::max(stage, 0);
  result.episodes = episode + 1;
  result.checkpoint = learner->Save(joint, hash);
  if (config.final_eval_episodes > 0) {
    const int last = LastStage(config);
    result.final_eval = evaluate(StageGame(config, last), last,
                                 config.final_eval_episodes,
                                 DeriveSeed(config.seed, 999));
    record(&result.final_eval, true);
  } else {
    record(nullptr, true);
  }
  if (!options.out_dir.empty()) {
    SaveCheckpoint(options.out_dir + "/final.ckpt", result.checkpoint);
  }
  return result;
}

}  // namespace sts2::harness
