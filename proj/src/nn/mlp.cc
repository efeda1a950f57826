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

#include "sts2/nn/mlp.h"

#include <cmath>
#include <string>

#include "sts2/rng.h"

namespace sts2::nn {

std::size_t ParameterCount(const std::vector<int>& sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    n += static_cast<std::size_t>(sizes[l]) * sizes[l + 1] + sizes[l + 1];
  }
  return n;
}

Gradients Gradients::ZerosLike(const Mlp& net) {
  return Gradients{net.layer_sizes(),
                   std::vector<double>(net.parameter_count(), 0.0)};
}

void Gradients::SetZero() { std::fill(values.begin(), values.end(), 0.0); }

void Gradients::Scale(double s) {
  for (double& v : values) v *= s;
}

void Gradients::Add(const Gradients& other) {
  if (other.layer_sizes != layer_sizes) {
    throw ArgumentError("gradient shapes differ");
  }
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
}

double Gradients::Norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

Mlp Mlp::Init(const std::vector<int>& layer_sizes, std::uint64_t seed) {
  return Init(layer_sizes, seed, 1.0);
}

Mlp Mlp::Init(const std::vector<int>& layer_sizes, std::uint64_t seed,
              double output_scale) {
  if (layer_sizes.size() < 2) {
    throw ArgumentError("an MLP needs at least an input and an output layer");
  }
  for (int n : layer_sizes) {
    if (n < 1) throw ArgumentError("layer sizes must be >= 1");
  }
  Mlp net;
  net.sizes_ = layer_sizes;
  net.params_.assign(ParameterCount(layer_sizes), 0.0);
  CounterRng rng(seed);
  std::size_t at = 0;
  for (int l = 0; l < net.num_affine(); ++l) {
    net.offsets_.push_back(at);
    const int in = layer_sizes[l];
    const int out = layer_sizes[l + 1];
    double bound = 1.0 / std::sqrt(static_cast<double>(in));
    if (l + 1 == net.num_affine()) bound *= output_scale;
    for (int i = 0; i < in * out; ++i) {
      net.params_[at++] = rng.Uniform(-bound, bound);
    }
    at += static_cast<std::size_t>(out);  // biases stay zero
  }
  return net;
}

void Mlp::SetParameters(std::span<const double> values) {
  if (values.size() != params_.size()) {
    throw ArgumentError("parameter count mismatch: got " +
                        std::to_string(values.size()) + ", expected " +
                        std::to_string(params_.size()));
  }
  std::copy(values.begin(), values.end(), params_.begin());
  ++version_;
}

std::span<const double> Mlp::Forward(std::span<const double> x,
                                     ForwardCache& cache) const {
  if (static_cast<int>(x.size()) != input_size()) {
    throw ArgumentError("input has " + std::to_string(x.size()) +
                        " entries, network expects " +
                        std::to_string(input_size()));
  }
  cache.net = this;
  cache.version = version_;
  cache.activations.resize(sizes_.size());
  cache.activations[0].assign(x.begin(), x.end());
  const int layers = num_affine();
  for (int l = 0; l < layers; ++l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    const std::vector<double>& a = cache.activations[l];
    std::vector<double>& z = cache.activations[l + 1];
    z.resize(static_cast<std::size_t>(out));
    const bool hidden = l + 1 < layers;
    for (int o = 0; o < out; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * in;
      double sum = b[o];
      for (int i = 0; i < in; ++i) sum += row[i] * a[i];
      z[o] = hidden && sum < 0.0 ? 0.0 : sum;
    }
  }
  return cache.activations.back();
}

std::span<const double> Mlp::Forward(std::span<const float> x,
                                     ForwardCache& cache) const {
  thread_local std::vector<double> buffer;
  buffer.assign(x.begin(), x.end());
  return Forward(std::span<const double>(buffer), cache);
}

std::vector<double> Mlp::Forward(std::span<const double> x) const {
  ForwardCache cache;
  const auto out = Forward(x, cache);
  return {out.begin(), out.end()};
}

void Mlp::BackwardAccumulate(const ForwardCache& cache,
                             std::span<const double> output_gradient,
                             Gradients& grads) const {
  if (cache.net != this || cache.version != version_) {
    throw ArgumentError("stale forward cache");
  }
  if (static_cast<int>(output_gradient.size()) != output_size()) {
    throw ArgumentError("output gradient has the wrong length");
  }
  if (grads.values.size() != params_.size()) {
    grads = Gradients::ZerosLike(*this);
  }
  thread_local std::vector<double> delta;
  thread_local std::vector<double> prev;
  delta.assign(output_gradient.begin(), output_gradient.end());
  for (int l = num_affine() - 1; l >= 0; --l) {
    const int in = sizes_[l];
    const int out = sizes_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    double* gw = grads.values.data() + weight_offset(l);
    double* gb = grads.values.data() + bias_offset(l);
    const std::vector<double>& a = cache.activations[l];
    const bool need_prev = l > 0;
    if (need_prev) prev.assign(static_cast<std::size_t>(in), 0.0);
    for (int o = 0; o < out; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      gb[o] += d;
      double* grow = gw + static_cast<std::size_t>(o) * in;
      const double* row = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) grow[i] += d * a[i];
      if (need_prev) {
        for (int i = 0; i < in; ++i) prev[i] += row[i] * d;
      }
    }
    if (need_prev) {
      // Rectifier derivative: the stored activation is zero where the
      // pre-activation was negative.
      for (int i = 0; i < in; ++i) {
        if (a[i] <= 0.0) prev[i] = 0.0;
      }
      delta.swap(prev);
    }
  }
}

Gradients Mlp::Backward(const ForwardCache& cache,
                        std::span<const double> output_gradient) const {
  Gradients grads = Gradients::ZerosLike(*this);
  BackwardAccumulate(cache, output_gradient, grads);
  return grads;
}

}  // namespace sts2::nn
