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

#include "sts2/rl/joint_action.h"

#include <string>

namespace sts2::rl {

JointActionCodec::JointActionCodec(std::vector<PlayerId> agents)
    : agents_(std::move(agents)) {
  if (agents_.empty()) throw ArgumentError("joint codec needs >= 1 agent");
  if (agents_.size() > 8) throw ArgumentError("joint codec supports <= 8 agents");
  for (std::size_t i = 0; i < agents_.size(); ++i) joint_count_ *= kNumActions;
}

int JointActionCodec::Encode(std::span<const Action> actions) const {
  if (actions.size() != agents_.size()) {
    throw ArgumentError("joint encode: expected " +
                        std::to_string(agents_.size()) + " actions");
  }
  int index = 0;
  for (Action a : actions) index = index * kNumActions + static_cast<int>(a);
  return index;
}

std::vector<Action> JointActionCodec::Decode(int index) const {
  if (index < 0 || index >= joint_count_) {
    throw ArgumentError("joint index " + std::to_string(index) +
                        " out of range [0, " + std::to_string(joint_count_) +
                        ")");
  }
  std::vector<Action> out(agents_.size());
  for (std::size_t i = agents_.size(); i-- > 0;) {
    out[i] = static_cast<Action>(index % kNumActions);
    index /= kNumActions;
  }
  return out;
}

}  // namespace sts2::rl
