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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sts2/nn/adam.h"
#include "sts2/rng.h"

namespace sts2::nn {
namespace {

std::vector<double> RandomVector(std::size_t n, CounterRng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.Uniform(-1.0, 1.0);
  return v;
}

// Straight-line reimplementation over the documented flat layout.
std::vector<double> ReferenceForward(const Mlp& net, std::vector<double> x) {
  const auto& sizes = net.layer_sizes();
  const auto p = net.parameters();
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    std::vector<double> y(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o) {
      double acc = p[off + static_cast<std::size_t>(out * in) +
                     static_cast<std::size_t>(o)];
      for (int i = 0; i < in; ++i) {
        acc += p[off + static_cast<std::size_t>(o * in + i)] *
               x[static_cast<std::size_t>(i)];
      }
      const bool hidden = l + 2 < sizes.size();
      y[static_cast<std::size_t>(o)] = hidden ? std::max(0.0, acc) : acc;
    }
    off += static_cast<std::size_t>(out * in + out);
    x = std::move(y);
  }
  return x;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

TEST_CASE("init") {
  const Mlp a = Mlp::Init({13, 64, 64, 6}, 9);
  const Mlp b = Mlp::Init({13, 64, 64, 6}, 9);
  CHECK(a == b);
  CHECK_FALSE(a == Mlp::Init({13, 64, 64, 6}, 10));
  CHECK(a.parameter_count() == ParameterCount({13, 64, 64, 6}));
  CHECK(a.parameter_count() == 13 * 64 + 64 + 64 * 64 + 64 + 64 * 6 + 6);
  for (int l = 0; l < a.num_affine(); ++l) {
    const std::size_t n = static_cast<std::size_t>(a.layer_sizes()[l + 1]);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(a.parameters()[a.bias_offset(l) + i] == 0.0);
    }
  }
  const double bound = 1.0 / std::sqrt(13.0);
  for (std::size_t i = 0; i < 13 * 64; ++i) {
    REQUIRE(std::abs(a.parameters()[i]) <= bound);
  }
  CHECK_THROWS_AS(Mlp::Init({13}, 1), ArgumentError);
  CHECK_THROWS_AS(Mlp::Init({13, 0, 6}, 1), ArgumentError);
}

TEST_CASE("forward special cases") {
  Mlp zero = Mlp::Init({4, 8, 3}, 1);
  std::vector<double> zeros(zero.parameter_count(), 0.0);
  zero.SetParameters(zeros);
  CHECK(zero.Forward(std::vector<double>{1, -2, 3, 4}) ==
        std::vector<double>{0, 0, 0});

  Mlp id = Mlp::Init({3, 3}, 1);
  std::vector<double> p(id.parameter_count(), 0.0);
  for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i * 3 + i)] = 1.0;
  id.SetParameters(p);
  const std::vector<double> x{0.25, -1.5, 7.0};
  CHECK(id.Forward(x) == x);

  CHECK_THROWS_AS(id.Forward(std::vector<double>{1.0}), ArgumentError);
}

TEST_CASE("forward matches the straight-line oracle") {
  CounterRng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int in = 1 + static_cast<int>(rng.Below(12));
    const int h = 1 + static_cast<int>(rng.Below(20));
    const int out = 1 + static_cast<int>(rng.Below(8));
    const Mlp net = Mlp::Init({in, h, h, out}, 100 + trial);
    const auto x = RandomVector(static_cast<std::size_t>(in), rng);
    const auto y = net.Forward(x);
    const auto ref = ReferenceForward(net, x);
    REQUIRE(y.size() == ref.size());
    for (std::size_t i = 0; i < y.size(); ++i) REQUIRE(y[i] == ref[i]);
    std::vector<float> xf(x.begin(), x.end());
    ForwardCache cache;
    const auto yf = net.Forward(std::span<const float>(xf), cache);
    const auto reff =
        ReferenceForward(net, std::vector<double>(xf.begin(), xf.end()));
    for (std::size_t i = 0; i < yf.size(); ++i) REQUIRE(yf[i] == reff[i]);
  }
}

TEST_CASE("backward special cases") {
  const Mlp net = Mlp::Init({5, 7, 3}, 2);
  ForwardCache cache;
  const std::vector<double> x{1, 2, 3, 4, 5};
  net.Forward(x, cache);
  const Gradients g = net.Backward(cache, std::vector<double>{0, 0, 0});
  CHECK(std::all_of(g.values.begin(), g.values.end(),
                    [](double v) { return v == 0.0; }));

  const Mlp lin = Mlp::Init({4, 3}, 5);
  lin.Forward(std::vector<double>{0.5, -1.0, 2.0, 3.0}, cache);
  const Gradients gl = lin.Backward(cache, std::vector<double>{1, 0, 0});
  CHECK(gl.values[0] == 0.5);
  CHECK(gl.values[1] == -1.0);
  CHECK(gl.values[2] == 2.0);
  CHECK(gl.values[3] == 3.0);
  for (std::size_t i = 4; i < 12; ++i) CHECK(gl.values[i] == 0.0);
  CHECK(gl.values[12] == 1.0);  // bias 0
  CHECK(gl.values[13] == 0.0);
}

// Central differences of L = <direction, f(x)> against reverse mode.
TEST_CASE("backward matches finite differences") {
  CounterRng rng(11);
  const double h = 1e-6;
  for (int trial = 0; trial < 25; ++trial) {
    const int in = 2 + static_cast<int>(rng.Below(5));
    const int hid = 2 + static_cast<int>(rng.Below(6));
    const int out = 1 + static_cast<int>(rng.Below(4));
    Mlp net = Mlp::Init({in, hid, hid, out}, 500 + trial);
    // Non-zero biases so that no unit sits exactly at the kink.
    std::vector<double> p(net.parameters().begin(), net.parameters().end());
    for (double& v : p) v += rng.Uniform(-0.1, 0.1);
    net.SetParameters(p);
    const auto x = RandomVector(static_cast<std::size_t>(in), rng);
    const auto dir = RandomVector(static_cast<std::size_t>(out), rng);
    ForwardCache cache;
    net.Forward(x, cache);
    const Gradients g = net.Backward(cache, dir);
    double max_err = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::vector<double> q = p;
      q[i] = p[i] + h;
      net.SetParameters(q);
      const double up = Dot(dir, net.Forward(x));
      q[i] = p[i] - h;
      net.SetParameters(q);
      const double down = Dot(dir, net.Forward(x));
      const double fd = (up - down) / (2.0 * h);
      const double err =
          std::abs(fd - g.values[i]) / std::max(1.0, std::abs(fd) + std::abs(g.values[i]));
      max_err = std::max(max_err, err);
    }
    net.SetParameters(p);
    CHECK(max_err <= 1e-4);
  }
}

TEST_CASE("stale or foreign caches are rejected") {
  Mlp net = Mlp::Init({3, 4, 2}, 1);
  const Mlp other = Mlp::Init({3, 4, 2}, 2);
  ForwardCache cache;
  net.Forward(std::vector<double>{1, 2, 3}, cache);
  CHECK_THROWS_AS(other.Backward(cache, std::vector<double>{1, 1}),
                  ArgumentError);
  net.mutable_parameters()[0] += 1.0;
  CHECK_THROWS_AS(net.Backward(cache, std::vector<double>{1, 1}),
                  ArgumentError);
  ForwardCache fresh;
  CHECK_THROWS_AS(net.Backward(fresh, std::vector<double>{1, 1}),
                  ArgumentError);
}

TEST_CASE("adam") {
  Mlp net = Mlp::Init({1, 1}, 1);
  net.SetParameters(std::vector<double>{1.0, 0.0});
  SUBCASE("first step moves by about lr") {
    AdamState st = AdamState::For(net, 0.1);
    Gradients g = Gradients::ZerosLike(net);
    g.values = {1.0, 0.0};
    AdamStep(net, g, st);
    // m_hat = 1, v_hat = 1, step = lr * 1 / (1 + eps).
    CHECK(net.parameters()[0] == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(net.parameters()[1] == 0.0);
    CHECK(st.step_count == 1);
  }
  SUBCASE("zero gradient is a no-op") {
    AdamState st = AdamState::For(net, 0.1);
    AdamStep(net, Gradients::ZerosLike(net), st);
    CHECK(net.parameters()[0] == 1.0);
  }
  SUBCASE("deterministic") {
    Mlp a = Mlp::Init({3, 5, 2}, 4);
    Mlp b = a;
    AdamState sa = AdamState::For(a, 0.01);
    AdamState sb = sa;
    Gradients g = Gradients::ZerosLike(a);
    CounterRng rng(1);
    for (double& v : g.values) v = rng.Uniform(-1, 1);
    for (int i = 0; i < 3; ++i) {
      AdamStep(a, g, sa);
      AdamStep(b, g, sb);
    }
    CHECK(a == b);
    CHECK(sa == sb);
  }
  SUBCASE("shape mismatch") {
    AdamState st = AdamState::For(net, 0.1);
    const Gradients g = Gradients::ZerosLike(Mlp::Init({2, 1}, 1));
    CHECK_THROWS_AS(AdamStep(net, g, st), ArgumentError);
  }
}

TEST_CASE("gradient norm clipping") {
  const Mlp net = Mlp::Init({1, 1}, 1);
  Gradients g = Gradients::ZerosLike(net);
  g.values = {3.0, 4.0};
  CHECK(ClipGradientNorm(g, 1.0) == doctest::Approx(5.0));
  CHECK(g.Norm() == doctest::Approx(1.0));
  g.values = {3.0, 4.0};
  ClipGradientNorm(g, 0.0);
  CHECK(g.values[0] == 3.0);
}

}  // namespace
}  // namespace sts2::nn
