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

// Simulator throughput and serial vs parallel evaluation timing.
//
//   sts2_bench [--seconds S] [--episodes N]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "sts2/game.h"
#include "sts2/harness/evaluate.h"

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Ticks per second on one thread with all slots scripted, or with every
// player idle when `scripted` is false (physics only).
double TickRate(int k, bool scripted, double seconds) {
  sts2::GameConfig g;
  g.k = k;
  const sts2::harness::Lineup lineup = sts2::harness::Lineup::Build(
      g, sts2::harness::SlotAssignment(2 * k, sts2::harness::SlotSpec::Scripted()));
  sts2::ActionSet actions(2 * k);
  std::vector<sts2::GameEvent> events;
  long long ticks = 0;
  std::uint64_t episode = 0;
  const auto t0 = Clock::now();
  double elapsed = 0.0;
  while (elapsed < seconds) {
    g.seed = episode++;
    sts2::GameState state = sts2::NewMatch(g);
    while (state.phase.kind != sts2::PhaseKind::kFinished) {
      std::fill(actions.begin(), actions.end(), std::nullopt);
      if (scripted) lineup.Act(g, state, actions);
      sts2::StepInPlace(g, state, actions, events);
      ++ticks;
    }
    elapsed = Since(t0);
  }
  return static_cast<double>(ticks) / elapsed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STS2 benchmarks"};
  double seconds = 3.0;
  int episodes = 64;
  app.add_option("--seconds", seconds, "Duration of each throughput run");
  app.add_option("--episodes", episodes, "Episodes for the evaluation timing");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads available: %d\n", omp_get_max_threads());
  for (const int k : {1, 2, 3}) {
    std::printf("%dv%d physics only: %12.0f ticks/s\n", k, k,
                TickRate(k, false, seconds));
    std::printf("%dv%d scripted:     %12.0f ticks/s\n", k, k,
                TickRate(k, true, seconds));
  }

  sts2::GameConfig g;
  g.k = 2;
  const auto lineup = sts2::harness::Lineup::Build(
      g, sts2::harness::SlotAssignment(4, sts2::harness::SlotSpec::Scripted()));
  auto t0 = Clock::now();
  const auto serial = sts2::harness::EvaluateSerial(g, lineup, episodes, 7);
  const double serial_s = Since(t0);
  t0 = Clock::now();
  const auto parallel = sts2::harness::Evaluate(g, lineup, episodes, 7);
  const double parallel_s = Since(t0);
  std::printf("evaluate %d episodes 2v2: serial %.2f s, parallel %.2f s (x%.2f), %s\n",
              episodes, serial_s, parallel_s, serial_s / parallel_s,
              serial == parallel ? "identical stats" : "STATS DIFFER");
  return serial == parallel ? 0 : 1;
}
