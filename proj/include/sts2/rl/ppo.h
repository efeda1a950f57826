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

// Proximal policy optimisation with a clipped surrogate, generalised
// advantage estimation and separate policy / value networks.

#ifndef STS2_RL_PPO_H_
#define STS2_RL_PPO_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sts2/nn/adam.h"
#include "sts2/nn/mlp.h"
#include "sts2/rng.h"

namespace sts2::rl {

struct PpoConfig {
  std::vector<int> hidden = {64, 64};
  double learning_rate = 3e-4;
  double clip_ratio = 0.2;
  double gae_lambda = 0.95;
  double gamma = 0.99;
  int epochs_per_update = 4;
  int minibatch_size = 256;
  double entropy_coef = 0.01;
  int rollout_length = 4096;
  double value_coef = 1.0;
  double max_grad_norm = 0.5;  // <= 0 disables clipping
  bool normalize_advantages = true;

  void Validate() const;
  bool operator==(const PpoConfig&) const = default;
};

struct PpoAgent {
  PpoConfig config;
  int obs_size = 0;
  int action_count = 0;
  nn::Mlp policy;  // logits
  nn::Mlp value;   // scalar
  nn::AdamState policy_adam;
  nn::AdamState value_adam;
  std::uint64_t env_steps = 0;
  std::uint64_t updates = 0;
};

PpoAgent MakePpoAgent(int obs_size, int action_count, const PpoConfig& config,
                      std::uint64_t seed);

// Numerically stable softmax / log-softmax.
std::vector<double> Softmax(std::span<const double> logits);
std::vector<double> LogSoftmax(std::span<const double> logits);

// Inverse-CDF draw from `probs` using one uniform from `rng`.
int SampleCategorical(std::span<const double> probs, CounterRng& rng);

struct PolicySample {
  int action = 0;
  double log_prob = 0.0;
  double value = 0.0;
};

PolicySample PpoPolicy(const PpoAgent& agent, std::span<const float> obs,
                       CounterRng& rng);
int PpoGreedy(const nn::Mlp& policy, std::span<const float> obs);
double PpoValue(const PpoAgent& agent, std::span<const float> obs);

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// values carries one bootstrap entry past the end. dones[t] marks that the
// transition at t ended an episode. Throws ArgumentError on length mismatch.
GaeResult ComputeGae(std::span<const double> rewards,
                     std::span<const double> values,
                     std::span<const std::uint8_t> dones, double gamma,
                     double lambda);

// In place to zero mean, unit (population) variance; untouched when the
// variance is zero.
void NormalizeAdvantages(std::span<double> advantages);

struct Rollout {
  int obs_size = 0;
  std::vector<float> obs;  // size() * obs_size
  std::vector<int> actions;
  std::vector<double> log_probs;
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const { return actions.size(); }
  std::span<const float> observation(std::size_t i) const {
    return std::span<const float>(obs).subspan(i * obs_size, obs_size);
  }
  // Throws ArgumentError unless every per-sample array is filled.
  void CheckComplete() const;
};

struct PpoLoss {
  double loss = 0.0;  // -(surrogate + entropy_coef * entropy) + value term
  double surrogate = 0.0;
  double entropy = 0.0;
  double value_loss = 0.0;
  double clip_fraction = 0.0;
  nn::Gradients policy_grads;
  nn::Gradients value_grads;
};

// Loss and exact gradients over rollout samples `indices`.
PpoLoss PpoLossAndGradients(const PpoAgent& agent, const Rollout& rollout,
                            std::span<const int> indices);

// The clipped objective term for one sample.
double ClippedSurrogateTerm(double ratio, double advantage, double clip_ratio);

struct PpoDiagnostics {
  double policy_loss = 0.0;  // mean -surrogate over minibatches
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double first_surrogate = 0.0;  // first minibatch of the first epoch
  double first_clip_fraction = 0.0;
  int minibatches = 0;
};

// Normalises advantages (per config), then runs epochs_per_update passes
// over shuffled minibatches.
PpoDiagnostics PpoUpdate(PpoAgent& agent, Rollout& rollout, CounterRng& rng);

}  // namespace sts2::rl

#endif  // STS2_RL_PPO_H_
