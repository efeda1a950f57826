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

#ifndef STS2_RNG_H_
#define STS2_RNG_H_

#include <cstdint>

namespace sts2 {

constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based stream: draw i is a pure function of (seed, i), so the whole
// generator state is the pair and can live inside a GameState snapshot.
class CounterRng {
 public:
  constexpr CounterRng() = default;
  constexpr CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  constexpr std::uint64_t Next() {
    return SplitMix64(SplitMix64(seed_) ^ (counter_++ * 0xD1B54A32D192ED03ull));
  }
  // Uniform in [0, 1) with 53 bits.
  constexpr double Uniform() {
    return static_cast<double>(Next() >> 11) * 0x1.0p-53;
  }
  constexpr double Uniform(double lo, double hi) {
    return lo + (hi - lo) * Uniform();
  }
  // Uniform integer in [0, n).
  constexpr std::uint64_t Below(std::uint64_t n) {
    return static_cast<std::uint64_t>(Uniform() * static_cast<double>(n));
  }

  constexpr std::uint64_t seed() const { return seed_; }
  constexpr std::uint64_t counter() const { return counter_; }
  constexpr bool operator==(const CounterRng&) const = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t counter_ = 0;
};

// Derives an independent seed for a sub-stream (episode e of an evaluation,
// network initialisation, ...).
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return SplitMix64(seed ^ SplitMix64(stream + 0x632BE59BD9B4E019ull));
}

}  // namespace sts2

#endif  // STS2_RNG_H_
