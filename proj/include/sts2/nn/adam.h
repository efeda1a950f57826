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

#ifndef STS2_NN_ADAM_H_
#define STS2_NN_ADAM_H_

#include <cstdint>
#include <vector>

#include "sts2/nn/mlp.h"

namespace sts2::nn {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step_count = 0;
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState For(const Mlp& net, double learning_rate);
  bool operator==(const AdamState&) const = default;
};

// One bias-corrected adaptive-moment step. Throws ArgumentError on a shape
// mismatch between the network, the gradients and the moments.
void AdamStep(Mlp& net, const Gradients& grads, AdamState& state);

// Rescales `grads` so its global norm is at most `max_norm` (no-op if
// max_norm <= 0). Returns the norm before clipping.
double ClipGradientNorm(Gradients& grads, double max_norm);

}  // namespace sts2::nn

#endif  // STS2_NN_ADAM_H_
