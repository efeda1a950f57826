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

#include "sts2/rl/replay_buffer.h"

#include <algorithm>

namespace sts2::rl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int obs_size)
    : capacity_(capacity), obs_size_(obs_size) {
  if (capacity == 0 || obs_size <= 0) {
    throw ArgumentError("replay buffer needs positive capacity and obs size");
  }
  const std::size_t n = capacity * static_cast<std::size_t>(obs_size);
  obs_.resize(n);
  next_obs_.resize(n);
  actions_.resize(capacity);
  rewards_.resize(capacity);
  dones_.resize(capacity);
}

void ReplayBuffer::Add(std::span<const float> obs, int action, double reward,
                       std::span<const float> next_obs, bool done) {
  if (static_cast<int>(obs.size()) != obs_size_ ||
      static_cast<int>(next_obs.size()) != obs_size_) {
    throw ArgumentError("transition observation has the wrong size");
  }
  const std::size_t at = next_ * static_cast<std::size_t>(obs_size_);
  std::copy(obs.begin(), obs.end(), obs_.begin() + static_cast<long>(at));
  std::copy(next_obs.begin(), next_obs.end(),
            next_obs_.begin() + static_cast<long>(at));
  actions_[next_] = action;
  rewards_[next_] = reward;
  dones_[next_] = done ? 1 : 0;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
  ++insertions_;
}

void ReplayBuffer::MarkLastDone() {
  if (size_ == 0) return;
  dones_[(next_ + capacity_ - 1) % capacity_] = 1;
}

Transition ReplayBuffer::Slot(std::size_t slot) const {
  const auto at = static_cast<long>(slot * static_cast<std::size_t>(obs_size_));
  Transition t;
  t.obs.assign(obs_.begin() + at, obs_.begin() + at + obs_size_);
  t.next_obs.assign(next_obs_.begin() + at, next_obs_.begin() + at + obs_size_);
  t.action = actions_[slot];
  t.reward = rewards_[slot];
  t.done = dones_[slot] != 0;
  return t;
}

Transition ReplayBuffer::At(std::size_t i) const {
  if (i >= size_) throw ArgumentError("replay index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : next_;
  return Slot((oldest + i) % capacity_);
}

std::vector<Transition> ReplayBuffer::Sample(std::size_t batch,
                                             CounterRng& rng) const {
  if (size_ == 0) throw ArgumentError("cannot sample an empty replay buffer");
  std::vector<Transition> out;
  out.reserve(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    out.push_back(At(static_cast<std::size_t>(rng.Below(size_))));
  }
  return out;
}

}  // namespace sts2::rl
