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

#include "sts2/rl/dqn.h"

#include <algorithm>
#include <cmath>

namespace sts2::rl {

void DqnConfig::Validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("dqn: gamma in [0, 1)");
  if (batch_size < 1) throw ConfigError("dqn: batch_size >= 1");
  if (replay_capacity < 1) throw ConfigError("dqn: replay_capacity >= 1");
  if (learn_every < 1) throw ConfigError("dqn: learn_every >= 1");
  if (target_sync_interval < 1) {
    throw ConfigError("dqn: target_sync_interval >= 1");
  }
  if (!(learning_rate >= 0.0)) throw ConfigError("dqn: learning_rate >= 0");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 &&
        epsilon_end <= 1.0)) {
    throw ConfigError("dqn: epsilon bounds in [0, 1]");
  }
  for (int h : hidden) {
    if (h < 1) throw ConfigError("dqn: hidden sizes >= 1");
  }
}

DqnAgent MakeDqnAgent(int obs_size, int action_count, const DqnConfig& config,
                      std::uint64_t seed) {
  config.Validate();
  DqnAgent agent;
  agent.config = config;
  agent.obs_size = obs_size;
  agent.action_count = action_count;
  std::vector<int> sizes{obs_size};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(action_count);
  agent.online = nn::Mlp::Init(sizes, seed);
  agent.target = agent.online;
  agent.adam = nn::AdamState::For(agent.online, config.learning_rate);
  agent.replay = ReplayBuffer(config.replay_capacity, obs_size);
  return agent;
}

double Epsilon(const DqnConfig& config, std::uint64_t step) {
  if (config.epsilon_decay_steps == 0 || step >= config.epsilon_decay_steps) {
    return config.epsilon_end;
  }
  const double frac = static_cast<double>(step) /
                      static_cast<double>(config.epsilon_decay_steps);
  return config.epsilon_start + (config.epsilon_end - config.epsilon_start) * frac;
}

int ArgMax(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<double> QValues(const nn::Mlp& net, std::span<const float> obs) {
  nn::ForwardCache cache;
  const auto q = net.Forward(obs, cache);
  return {q.begin(), q.end()};
}

int DqnGreedy(const nn::Mlp& online, std::span<const float> obs) {
  thread_local nn::ForwardCache cache;
  return ArgMax(online.Forward(obs, cache));
}

int DqnAct(const DqnAgent& agent, std::span<const float> obs, CounterRng& rng) {
  const double eps = Epsilon(agent.config, agent.env_steps);
  if (rng.Uniform() < eps) {
    return static_cast<int>(rng.Below(static_cast<std::uint64_t>(agent.action_count)));
  }
  return DqnGreedy(agent.online, obs);
}

double TdTarget(double reward, bool done, double gamma, double max_next_q) {
  return reward + gamma * (done ? 0.0 : 1.0) * max_next_q;
}

DqnLoss DqnLossAndGradient(const DqnAgent& agent,
                           std::span<const Transition> batch) {
  if (batch.empty()) throw ArgumentError("dqn: empty batch");
  DqnLoss out;
  out.grads = nn::Gradients::ZerosLike(agent.online);
  nn::ForwardCache cache;
  nn::ForwardCache target_cache;
  std::vector<double> dq(static_cast<std::size_t>(agent.action_count), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Transition& t : batch) {
    if (t.action < 0 || t.action >= agent.action_count) {
      throw ArgumentError("dqn: transition action out of range");
    }
    double max_next = 0.0;
    if (!t.done) {
      const auto next_q = agent.target.Forward(
          std::span<const float>(t.next_obs), target_cache);
      max_next = *std::max_element(next_q.begin(), next_q.end());
    }
    const double y = TdTarget(t.reward, t.done, agent.config.gamma, max_next);
    const auto q = agent.online.Forward(std::span<const float>(t.obs), cache);
    const double err = q[t.action] - y;
    double grad = 0.0;
    if (agent.config.huber && std::abs(err) > 1.0) {
      out.loss += (std::abs(err) - 0.5) * inv_n;
      grad = (err > 0.0 ? 1.0 : -1.0) * inv_n;
    } else if (agent.config.huber) {
      out.loss += 0.5 * err * err * inv_n;
      grad = err * inv_n;
    } else {
      out.loss += err * err * inv_n;
      grad = 2.0 * err * inv_n;
    }
    std::fill(dq.begin(), dq.end(), 0.0);
    dq[static_cast<std::size_t>(t.action)] = grad;
    agent.online.BackwardAccumulate(cache, dq, out.grads);
  }
  return out;
}

double DqnLearn(DqnAgent& agent, std::span<const Transition> batch) {
  DqnLoss loss = DqnLossAndGradient(agent, batch);
  nn::ClipGradientNorm(loss.grads, agent.config.max_grad_norm);
  nn::AdamStep(agent.online, loss.grads, agent.adam);
  ++agent.learn_steps;
  return loss.loss;
}

void DqnSyncTarget(DqnAgent& agent) {
  agent.target.SetParameters(agent.online.parameters());
}

}  // namespace sts2::rl
