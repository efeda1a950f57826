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

#include "sts2/nn/adam.h"

#include <cmath>

namespace sts2::nn {

AdamState AdamState::For(const Mlp& net, double learning_rate) {
  AdamState s;
  s.first_moment.assign(net.parameter_count(), 0.0);
  s.second_moment.assign(net.parameter_count(), 0.0);
  s.learning_rate = learning_rate;
  return s;
}

void AdamStep(Mlp& net, const Gradients& grads, AdamState& state) {
  const std::size_t n = net.parameter_count();
  if (grads.values.size() != n || grads.layer_sizes != net.layer_sizes() ||
      state.first_moment.size() != n || state.second_moment.size() != n) {
    throw ArgumentError("Adam step: shape mismatch");
  }
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  std::span<double> params = net.mutable_parameters();
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grads.values[i];
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g * g;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

double ClipGradientNorm(Gradients& grads, double max_norm) {
  const double norm = grads.Norm();
  if (max_norm > 0.0 && norm > max_norm) grads.Scale(max_norm / norm);
  return norm;
}

}  // namespace sts2::nn
