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

#ifndef STS2_RL_REPLAY_BUFFER_H_
#define STS2_RL_REPLAY_BUFFER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sts2/rng.h"
#include "sts2/types.h"

namespace sts2::rl {

struct Transition {
  std::vector<float> obs;
  int action = 0;
  double reward = 0.0;
  std::vector<float> next_obs;
  bool done = false;

  bool operator==(const Transition&) const = default;
};

// Fixed-capacity ring of transitions; the oldest entry is evicted first.
class ReplayBuffer {
 public:
  ReplayBuffer() = default;
  ReplayBuffer(std::size_t capacity, int obs_size);

  void Add(std::span<const float> obs, int action, double reward,
           std::span<const float> next_obs, bool done);
  void Add(const Transition& t) {
    Add(t.obs, t.action, t.reward, t.next_obs, t.done);
  }

  // Flags the most recent transition as terminal, for episodes that end
  // between two learner decisions.
  void MarkLastDone();

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t insertions() const { return insertions_; }
  int obs_size() const { return obs_size_; }

  // i = 0 is the oldest stored transition.
  Transition At(std::size_t i) const;

  // Uniform with replacement.
  std::vector<Transition> Sample(std::size_t batch, CounterRng& rng) const;

 private:
  Transition Slot(std::size_t slot) const;

  std::size_t capacity_ = 0;
  int obs_size_ = 0;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  std::uint64_t insertions_ = 0;
  std::vector<float> obs_;
  std::vector<float> next_obs_;
  std::vector<int> actions_;
  std::vector<double> rewards_;
  std::vector<std::uint8_t> dones_;
};

}  // namespace sts2::rl

#endif  // STS2_RL_REPLAY_BUFFER_H_
