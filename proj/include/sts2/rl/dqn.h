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

// Deep Q-learning with an experience replay ring, a periodically synced
// target network and a linear epsilon-greedy schedule.

#ifndef STS2_RL_DQN_H_
#define STS2_RL_DQN_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sts2/nn/adam.h"
#include "sts2/nn/mlp.h"
#include "sts2/rl/replay_buffer.h"
#include "sts2/rng.h"

namespace sts2::rl {

struct DqnConfig {
  std::vector<int> hidden = {64, 64};
  double learning_rate = 1e-4;
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::uint64_t epsilon_decay_steps = 200000;
  std::uint64_t target_sync_interval = 2000;  // env steps
  int batch_size = 64;
  std::size_t replay_capacity = 100000;
  int learn_every = 4;  // env steps between gradient steps
  std::uint64_t learning_starts = 1000;
  bool huber = false;
  double max_grad_norm = 10.0;  // <= 0 disables clipping

  void Validate() const;
  bool operator==(const DqnConfig&) const = default;
};

struct DqnAgent {
  DqnConfig config;
  int obs_size = 0;
  int action_count = 0;
  nn::Mlp online;
  nn::Mlp target;
  nn::AdamState adam;
  ReplayBuffer replay;
  std::uint64_t env_steps = 0;    // drives the epsilon schedule
  std::uint64_t learn_steps = 0;
};

DqnAgent MakeDqnAgent(int obs_size, int action_count, const DqnConfig& config,
                      std::uint64_t seed);

// Linear from epsilon_start to epsilon_end over decay_steps, then constant.
double Epsilon(const DqnConfig& config, std::uint64_t step);

// Lowest index wins ties.
int ArgMax(std::span<const double> values);

std::vector<double> QValues(const nn::Mlp& net, std::span<const float> obs);

// Epsilon-greedy at the agent's current env_steps. Does not advance the
// schedule; the caller owns env_steps.
int DqnAct(const DqnAgent& agent, std::span<const float> obs, CounterRng& rng);
int DqnGreedy(const nn::Mlp& online, std::span<const float> obs);

// y = r + gamma * (1 - done) * max_a' Q_target(s', a').
double TdTarget(double reward, bool done, double gamma, double max_next_q);

struct DqnLoss {
  double loss = 0.0;
  nn::Gradients grads;  // d loss / d online parameters
};

// Mean squared (or Huber) TD error over the batch, with the target network
// held fixed. Throws ArgumentError for an empty batch.
DqnLoss DqnLossAndGradient(const DqnAgent& agent,
                           std::span<const Transition> batch);

// One optimizer step on `batch`; returns the pre-step loss.
double DqnLearn(DqnAgent& agent, std::span<const Transition> batch);

void DqnSyncTarget(DqnAgent& agent);

}  // namespace sts2::rl

#endif  // STS2_RL_DQN_H_
