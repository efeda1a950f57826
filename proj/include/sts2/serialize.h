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

// JSON forms of the simulation types, shared by replay logs, experiment files
// and the match-server wire protocol.

#ifndef STS2_SERIALIZE_H_
#define STS2_SERIALIZE_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "sts2/game.h"

namespace sts2 {

using Json = nlohmann::json;

// Every GameConfig field. Unknown keys in `from` are rejected with
// ConfigError; missing keys keep the value already in `config`.
Json ConfigToJson(const GameConfig& config);
void ConfigFromJson(const Json& from, GameConfig& config);

// FNV-1a over the canonical config dump.
std::uint64_t Fnv1a64(std::string_view bytes);
std::uint64_t ConfigHash(const GameConfig& config);
std::string HexU64(std::uint64_t v);

Json PlayerIdToJson(PlayerId p);
PlayerId PlayerIdFromJson(const Json& j);

Json BallToJson(const BallState& ball);
BallState BallFromJson(const Json& j);

std::string_view PhaseName(PhaseKind kind);

Json EventToJson(const GameEvent& e);
GameEvent EventFromJson(const Json& j);

// Players as {"team","index","x","y","vx","vy","has_ball"}.
Json PlayersToJson(const GameState& state);

Json ActionsToJson(const ActionSet& actions);
ActionSet ActionsFromJson(const Json& j, int num_players);

}  // namespace sts2

#endif  // STS2_SERIALIZE_H_
