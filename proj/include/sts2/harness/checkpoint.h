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


// Binary policy checkpoints.
//
// Layout (little-endian):
//   char[8]  magic "STS2CKPT"
//   u16      format version
//   u8       algo tag (1 = DQN, 2 = PPO)
//   u8       reserved (0)
//   u32      observation size
//   u32      action count
//   u32      jointly controlled agents
//   u64      env-step counter
//   u64      experiment config hash
//   u32      network count, then per network:
//              u32 layer count, u32 sizes[layer count],
//              f32 parameters in Mlp layer order
//   u32      optimizer count, then per optimizer:
//              u64 step count, f64 lr, beta1, beta2, epsilon,
//              u32 n, f32 first moment[n], f32 second moment[n]
//
// Network 0 is the acting network: DQN online Q, or PPO policy logits.

#ifndef STS2_HARNESS_CHECKPOINT_H_
#define STS2_HARNESS_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sts2/nn/adam.h"
#include "sts2/nn/mlp.h"
#include "sts2/rl/dqn.h"
#include "sts2/rl/ppo.h"

namespace sts2::harness {

inline constexpr char kCheckpointMagic[8] = {'S', 'T', 'S', '2',
                                             'C', 'K', 'P', 'T'};
inline constexpr std::uint16_t kCheckpointVersion = 1;

enum class Algo : std::uint8_t { kDqn = 1, kPpo = 2 };
std::string_view AlgoName(Algo algo);

class CheckpointError : public Error {
 public:
  enum class Kind { kIo, kTruncated, kBadMagic, kVersion, kSizeMismatch };
  CheckpointError(Kind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Checkpoint {
  Algo algo = Algo::kDqn;
  int obs_size = 0;
  int action_count = 0;
  int joint_agents = 1;
  std::uint64_t env_steps = 0;
  std::uint64_t config_hash = 0;
  std::vector<nn::Mlp> networks;
  std::vector<nn::AdamState> optimizers;

  const nn::Mlp& acting_network() const { return networks.front(); }
};

Checkpoint CheckpointFromDqn(const rl::DqnAgent& agent, int joint_agents,
                             std::uint64_t config_hash);
Checkpoint CheckpointFromPpo(const rl::PpoAgent& agent, int joint_agents,
                             std::uint64_t config_hash);

std::string EncodeCheckpoint(const Checkpoint& ckpt);
// Throws CheckpointError; never returns a partially filled checkpoint.
Checkpoint DecodeCheckpoint(std::string_view bytes);

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::string& path);

// Greedy action of the acting network: argmax of Q values or logits.
int GreedyAction(const Checkpoint& ckpt, std::span<const float> obs);

}  // namespace sts2::harness

#endif  // STS2_HARNESS_CHECKPOINT_H_
