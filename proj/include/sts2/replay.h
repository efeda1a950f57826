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

// Replay log: newline-delimited JSON. Line 1 is a header carrying the full
// GameConfig (seed included) and its hash; every following line is the
// post-step snapshot of one tick together with the actions that produced it
// and the events it emitted. A log always starts from NewMatch(config), so
// header + actions are enough to regenerate it byte for byte.

#ifndef STS2_REPLAY_H_
#define STS2_REPLAY_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sts2/game.h"
#include "sts2/serialize.h"

namespace sts2 {

class ReplayError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kReplayVersion = 1;

struct ReplayFrame {
  GameState state;
  std::vector<GameEvent> events;
  ActionSet actions;
};

struct Replay {
  GameConfig config;
  std::uint64_t config_hash = 0;
  std::vector<ReplayFrame> frames;
};

std::string ReplayHeaderLine(const GameConfig& config);
std::string ReplayFrameLine(const GameState& state,
                            const std::vector<GameEvent>& events,
                            const ActionSet& actions);
Json StateToJson(const GameState& state);
GameState StateFromJson(const Json& j, int k);

class ReplayWriter {
 public:
  // Writes the header immediately.
  ReplayWriter(std::ostream& out, const GameConfig& config);

  void Record(const GameState& state, const std::vector<GameEvent>& events,
              const ActionSet& actions);

 private:
  std::ostream* out_;
};

// Throws ReplayError on malformed input.
Replay ParseReplay(std::istream& in);
Replay LoadReplay(const std::string& path);

// Re-simulates from the header config and the recorded actions and returns
// the resulting log text.
std::string RegenerateReplay(const Replay& replay);

}  // namespace sts2

#endif  // STS2_REPLAY_H_
