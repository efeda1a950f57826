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

// Dense multilayer perceptron with rectifier hidden layers and an identity
// output layer, plus exact reverse-mode gradients.
//
// Parameters live in one flat double array, layer by layer: the weight
// matrix of layer l (out x in, row-major) followed by its bias vector.
// Gradients and optimizer moments use the same layout.

#ifndef STS2_NN_MLP_H_
#define STS2_NN_MLP_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sts2/types.h"

namespace sts2::nn {

class Mlp;

// Activations recorded by Forward for use by Backward.
struct ForwardCache {
  const Mlp* net = nullptr;
  std::uint64_t version = 0;
  std::vector<std::vector<double>> activations;  // [0] is the input

  std::span<const double> output() const { return activations.back(); }
};

struct Gradients {
  std::vector<int> layer_sizes;
  std::vector<double> values;

  static Gradients ZerosLike(const Mlp& net);
  void SetZero();
  void Scale(double s);
  void Add(const Gradients& other);
  double Norm() const;
};

class Mlp {
 public:
  Mlp() = default;

  // Fan-in scaled uniform weights U(-1/sqrt(fan_in), 1/sqrt(fan_in)), zero
  // biases. Throws ArgumentError for fewer than two layers or a size < 1.
  static Mlp Init(const std::vector<int>& layer_sizes, std::uint64_t seed);

  // Same as Init but with the last layer's weights scaled by `output_scale`.
  static Mlp Init(const std::vector<int>& layer_sizes, std::uint64_t seed,
                  double output_scale);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  int num_affine() const { return static_cast<int>(sizes_.size()) - 1; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<const double> parameters() const { return params_; }
  // Mutable access invalidates outstanding caches.
  std::span<double> mutable_parameters() {
    ++version_;
    return params_;
  }
  void SetParameters(std::span<const double> values);
  std::uint64_t version() const { return version_; }

  std::size_t weight_offset(int layer) const { return offsets_[layer]; }
  std::size_t bias_offset(int layer) const {
    return offsets_[layer] + static_cast<std::size_t>(sizes_[layer + 1]) *
                                 static_cast<std::size_t>(sizes_[layer]);
  }

  // Throws ArgumentError on an input of the wrong length.
  std::span<const double> Forward(std::span<const double> x,
                                  ForwardCache& cache) const;
  std::span<const double> Forward(std::span<const float> x,
                                  ForwardCache& cache) const;
  std::vector<double> Forward(std::span<const double> x) const;

  // Adds d(scalar)/d(params) into `grads` given d(scalar)/d(output).
  // Throws ArgumentError when `cache` was produced by another network or
  // before the parameters last changed.
  void BackwardAccumulate(const ForwardCache& cache,
                          std::span<const double> output_gradient,
                          Gradients& grads) const;
  Gradients Backward(const ForwardCache& cache,
                     std::span<const double> output_gradient) const;

  bool operator==(const Mlp& o) const {
    return sizes_ == o.sizes_ && params_ == o.params_;
  }

 private:
  std::vector<int> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
  std::uint64_t version_ = 0;
};

std::size_t ParameterCount(const std::vector<int>& layer_sizes);

}  // namespace sts2::nn

#endif  // STS2_NN_MLP_H_
