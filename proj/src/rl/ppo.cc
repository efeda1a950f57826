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

#include "sts2/rl/ppo.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sts2/rl/dqn.h"

namespace sts2::rl {

void PpoConfig::Validate() const {
  if (!(clip_ratio > 0.0)) throw ConfigError("ppo: clip_ratio > 0");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) {
    throw ConfigError("ppo: gae_lambda in [0, 1]");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("ppo: gamma in [0, 1]");
  if (epochs_per_update < 1) throw ConfigError("ppo: epochs_per_update >= 1");
  if (minibatch_size < 1) throw ConfigError("ppo: minibatch_size >= 1");
  if (rollout_length < 1) throw ConfigError("ppo: rollout_length >= 1");
  if (!(learning_rate >= 0.0)) throw ConfigError("ppo: learning_rate >= 0");
  for (int h : hidden) {
    if (h < 1) throw ConfigError("ppo: hidden sizes >= 1");
  }
}

PpoAgent MakePpoAgent(int obs_size, int action_count, const PpoConfig& config,
                      std::uint64_t seed) {
  config.Validate();
  PpoAgent agent;
  agent.config = config;
  agent.obs_size = obs_size;
  agent.action_count = action_count;
  std::vector<int> sizes{obs_size};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  std::vector<int> policy_sizes = sizes;
  policy_sizes.push_back(action_count);
  sizes.push_back(1);
  // Small final layer keeps the initial policy close to uniform.
  agent.policy = nn::Mlp::Init(policy_sizes, DeriveSeed(seed, 1), 0.01);
  agent.value = nn::Mlp::Init(sizes, DeriveSeed(seed, 2));
  agent.policy_adam = nn::AdamState::For(agent.policy, config.learning_rate);
  agent.value_adam = nn::AdamState::For(agent.value, config.learning_rate);
  return agent;
}

std::vector<double> LogSoftmax(std::span<const double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - m);
  const double log_z = m + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - log_z;
  return out;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> out = LogSoftmax(logits);
  for (double& v : out) v = std::exp(v);
  return out;
}

int SampleCategorical(std::span<const double> probs, CounterRng& rng) {
  const double u = rng.Uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding left u above the running sum: take the last non-zero entry.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

PolicySample PpoPolicy(const PpoAgent& agent, std::span<const float> obs,
                       CounterRng& rng) {
  thread_local nn::ForwardCache cache;
  const auto logits = agent.policy.Forward(obs, cache);
  const std::vector<double> logp = LogSoftmax(logits);
  std::vector<double> probs(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i) probs[i] = std::exp(logp[i]);
  PolicySample s;
  s.action = SampleCategorical(probs, rng);
  s.log_prob = logp[static_cast<std::size_t>(s.action)];
  s.value = PpoValue(agent, obs);
  return s;
}

int PpoGreedy(const nn::Mlp& policy, std::span<const float> obs) {
  thread_local nn::ForwardCache cache;
  return ArgMax(policy.Forward(obs, cache));
}

double PpoValue(const PpoAgent& agent, std::span<const float> obs) {
  thread_local nn::ForwardCache cache;
  return agent.value.Forward(obs, cache)[0];
}

GaeResult ComputeGae(std::span<const double> rewards,
                     std::span<const double> values,
                     std::span<const std::uint8_t> dones, double gamma,
                     double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n + 1 || dones.size() != n) {
    throw ArgumentError("gae: need len(values) = len(rewards) + 1 = len(dones) + 1");
  }
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_adv = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const double not_done = dones[t] ? 0.0 : 1.0;
    const double delta =
        rewards[t] + gamma * not_done * values[t + 1] - values[t];
    next_adv = delta + gamma * lambda * not_done * next_adv;
    out.advantages[t] = next_adv;
    out.returns[t] = next_adv + values[t];
  }
  return out;
}

void NormalizeAdvantages(std::span<double> adv) {
  if (adv.empty()) return;
  const double n = static_cast<double>(adv.size());
  const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / n;
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  var /= n;
  if (!(var > 0.0)) return;
  const double inv_std = 1.0 / std::sqrt(var);
  for (double& a : adv) a = (a - mean) * inv_std;
}

void Rollout::CheckComplete() const {
  const std::size_t n = actions.size();
  if (n == 0 || log_probs.size() != n || advantages.size() != n ||
      returns.size() != n ||
      obs.size() != n * static_cast<std::size_t>(obs_size)) {
    throw ArgumentError("ppo: incomplete rollout");
  }
}

double ClippedSurrogateTerm(double ratio, double advantage, double clip_ratio) {
  const double clipped = std::clamp(ratio, 1.0 - clip_ratio, 1.0 + clip_ratio);
  return std::min(ratio * advantage, clipped * advantage);
}

PpoLoss PpoLossAndGradients(const PpoAgent& agent, const Rollout& rollout,
                            std::span<const int> indices) {
  if (indices.empty()) throw ArgumentError("ppo: empty minibatch");
  const PpoConfig& cfg = agent.config;
  PpoLoss out;
  out.policy_grads = nn::Gradients::ZerosLike(agent.policy);
  out.value_grads = nn::Gradients::ZerosLike(agent.value);
  nn::ForwardCache pcache;
  nn::ForwardCache vcache;
  const double inv_n = 1.0 / static_cast<double>(indices.size());
  const std::size_t na = static_cast<std::size_t>(agent.action_count);
  std::vector<double> dlogits(na);
  double clipped = 0.0;
  for (int idx : indices) {
    const auto i = static_cast<std::size_t>(idx);
    const auto obs = rollout.observation(i);
    const int a = rollout.actions[i];
    const double adv = rollout.advantages[i];

    const auto logits = agent.policy.Forward(obs, pcache);
    const std::vector<double> logp = LogSoftmax(logits);
    double entropy = 0.0;
    for (double lp : logp) entropy -= std::exp(lp) * lp;
    const double ratio = std::exp(logp[static_cast<std::size_t>(a)] -
                                  rollout.log_probs[i]);
    const double term = ClippedSurrogateTerm(ratio, adv, cfg.clip_ratio);
    const bool outside = std::abs(ratio - 1.0) > cfg.clip_ratio;
    if (outside) clipped += 1.0;
    // The unclipped branch carries the gradient unless the clipped branch is
    // strictly smaller.
    const double clipped_term =
        std::clamp(ratio, 1.0 - cfg.clip_ratio, 1.0 + cfg.clip_ratio) * adv;
    const double d_term_d_logp = ratio * adv <= clipped_term ? ratio * adv : 0.0;

    out.surrogate += term * inv_n;
    out.entropy += entropy * inv_n;
    for (std::size_t j = 0; j < na; ++j) {
      const double p = std::exp(logp[j]);
      const double d_logp_a = (static_cast<int>(j) == a ? 1.0 : 0.0) - p;
      const double d_entropy = -p * (logp[j] + entropy);
      dlogits[j] =
          -(d_term_d_logp * d_logp_a + cfg.entropy_coef * d_entropy) * inv_n;
    }
    agent.policy.BackwardAccumulate(pcache, dlogits, out.policy_grads);

    const double v = agent.value.Forward(obs, vcache)[0];
    const double err = v - rollout.returns[i];
    out.value_loss += err * err * inv_n;
    const double dv = cfg.value_coef * 2.0 * err * inv_n;
    agent.value.BackwardAccumulate(vcache, std::span<const double>(&dv, 1),
                                   out.value_grads);
  }
  out.clip_fraction = clipped * inv_n;
  out.loss = -(out.surrogate + cfg.entropy_coef * out.entropy) +
             cfg.value_coef * out.value_loss;
  return out;
}

PpoDiagnostics PpoUpdate(PpoAgent& agent, Rollout& rollout, CounterRng& rng) {
  rollout.CheckComplete();
  const PpoConfig& cfg = agent.config;
  if (cfg.normalize_advantages) NormalizeAdvantages(rollout.advantages);
  const int n = static_cast<int>(rollout.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  PpoDiagnostics diag;
  for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    // Fisher-Yates with the agent's stream.
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.Below(static_cast<std::uint64_t>(i + 1)));
      std::swap(order[static_cast<std::size_t>(i)],
                order[static_cast<std::size_t>(j)]);
    }
    for (int start = 0; start < n; start += cfg.minibatch_size) {
      const int len = std::min(cfg.minibatch_size, n - start);
      const std::span<const int> mb(order.data() + start,
                                    static_cast<std::size_t>(len));
      PpoLoss loss = PpoLossAndGradients(agent, rollout, mb);
      if (diag.minibatches == 0) {
        diag.first_surrogate = loss.surrogate;
        diag.first_clip_fraction = loss.clip_fraction;
      }
      ++diag.minibatches;
      diag.policy_loss += -loss.surrogate;
      diag.value_loss += loss.value_loss;
      diag.entropy += loss.entropy;
      diag.clip_fraction += loss.clip_fraction;
      nn::ClipGradientNorm(loss.policy_grads, cfg.max_grad_norm);
      nn::ClipGradientNorm(loss.value_grads, cfg.max_grad_norm);
      nn::AdamStep(agent.policy, loss.policy_grads, agent.policy_adam);
      nn::AdamStep(agent.value, loss.value_grads, agent.value_adam);
    }
  }
  if (diag.minibatches > 0) {
    const double m = diag.minibatches;
    diag.policy_loss /= m;
    diag.value_loss /= m;
    diag.entropy /= m;
    diag.clip_fraction /= m;
  }
  ++agent.updates;
  return diag;
}

}  // namespace sts2::rl
