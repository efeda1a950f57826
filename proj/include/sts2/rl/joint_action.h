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

#ifndef STS2_RL_JOINT_ACTION_H_
#define STS2_RL_JOINT_ACTION_H_

#include <span>
#include <vector>

#include "sts2/types.h"

namespace sts2::rl {

// Mixed-radix base-6 bijection between one action per controlled player and
// a single joint index. The first agent is the most significant digit.
class JointActionCodec {
 public:
  explicit JointActionCodec(std::vector<PlayerId> agents);

  const std::vector<PlayerId>& agents() const { return agents_; }
  int joint_count() const { return joint_count_; }

  // Throws ArgumentError on a wrong-length input.
  int Encode(std::span<const Action> actions) const;
  // Throws ArgumentError for an index outside [0, joint_count).
  std::vector<Action> Decode(int index) const;

 private:
  std::vector<PlayerId> agents_;
  int joint_count_ = 1;
};

}  // namespace sts2::rl

#endif  // STS2_RL_JOINT_ACTION_H_
