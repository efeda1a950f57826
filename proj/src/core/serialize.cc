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

#include "sts2/serialize.h"

#include <cstdio>

namespace sts2 {
namespace {

template <typename T>
void Take(const Json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

Vec2 Get2(const Json& j, const char* kx, const char* ky) {
  return {j.at(kx).get<double>(), j.at(ky).get<double>()};
}

}  // namespace

Json ConfigToJson(const GameConfig& c) {
  return Json{
      {"k", c.k},
      {"half_width", c.half_width},
      {"half_length", c.half_length},
      {"goal_mouth_width", c.goal_mouth_width},
      {"max_speed", c.max_speed},
      {"accel_per_tick", c.accel_per_tick},
      {"friction_coeff", c.friction_coeff},
      {"pickup_radius", c.pickup_radius},
      {"steal_radius", c.steal_radius},
      {"steal_probability_per_tick", c.steal_probability_per_tick},
      {"pass_speed", c.pass_speed},
      {"shot_speed", c.shot_speed},
      {"block_radius", c.block_radius},
      {"episode_length", c.episode_length},
      {"faceoff_countdown", c.faceoff_countdown},
      {"randomize_start", c.randomize_start},
      {"seed", c.seed},
  };
}

void ConfigFromJson(const Json& from, GameConfig& c) {
  if (!from.is_object()) throw ConfigError("game config must be an object");
  const Json known = ConfigToJson(c);
  for (const auto& [key, value] : from.items()) {
    if (!known.contains(key)) throw ConfigError("unknown game key: " + key);
  }
  try {
    Take(from, "k", c.k);
    Take(from, "half_width", c.half_width);
    Take(from, "half_length", c.half_length);
    Take(from, "goal_mouth_width", c.goal_mouth_width);
    Take(from, "max_speed", c.max_speed);
    Take(from, "accel_per_tick", c.accel_per_tick);
    Take(from, "friction_coeff", c.friction_coeff);
    Take(from, "pickup_radius", c.pickup_radius);
    Take(from, "steal_radius", c.steal_radius);
    Take(from, "steal_probability_per_tick", c.steal_probability_per_tick);
    Take(from, "pass_speed", c.pass_speed);
    Take(from, "shot_speed", c.shot_speed);
    Take(from, "block_radius", c.block_radius);
    Take(from, "episode_length", c.episode_length);
    Take(from, "faceoff_countdown", c.faceoff_countdown);
    Take(from, "randomize_start", c.randomize_start);
    Take(from, "seed", c.seed);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad game config value: ") + e.what());
  }
}

std::uint64_t Fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t ConfigHash(const GameConfig& config) {
  return Fnv1a64(ConfigToJson(config).dump());
}

std::string HexU64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

Json PlayerIdToJson(PlayerId p) {
  return Json{{"team", TeamName(p.team)}, {"index", p.index}};
}

PlayerId PlayerIdFromJson(const Json& j) {
  const auto team = ParseTeam(j.at("team").get<std::string>());
  if (!team) throw ArgumentError("bad team in " + j.dump());
  return {*team, j.at("index").get<int>()};
}

Json BallToJson(const BallState& b) {
  if (const auto* c = std::get_if<ball::Controlled>(&b)) {
    return Json{{"state", "controlled"}, {"owner", PlayerIdToJson(c->owner)}};
  }
  if (const auto* f = std::get_if<ball::InFlight>(&b)) {
    Json j{{"state", "in_flight"},
           {"kind", f->kind == ball::FlightKind::kPass ? "pass" : "shot"},
           {"x", f->pos.x},
           {"y", f->pos.y},
           {"vx", f->vel.x},
           {"vy", f->vel.y},
           {"origin", PlayerIdToJson(f->origin)}};
    if (f->kind == ball::FlightKind::kPass) {
      j["target"] = PlayerIdToJson(f->target);
    }
    return j;
  }
  const auto& l = std::get<ball::Loose>(b);
  return Json{{"state", "loose"},
              {"x", l.pos.x},
              {"y", l.pos.y},
              {"vx", l.vel.x},
              {"vy", l.vel.y}};
}

BallState BallFromJson(const Json& j) {
  const std::string state = j.at("state").get<std::string>();
  if (state == "controlled") {
    return ball::Controlled{PlayerIdFromJson(j.at("owner"))};
  }
  if (state == "in_flight") {
    ball::InFlight f;
    f.pos = Get2(j, "x", "y");
    f.vel = Get2(j, "vx", "vy");
    f.origin = PlayerIdFromJson(j.at("origin"));
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "pass") {
      f.kind = ball::FlightKind::kPass;
      f.target = PlayerIdFromJson(j.at("target"));
    } else if (kind == "shot") {
      f.kind = ball::FlightKind::kShot;
      f.target = f.origin;
    } else {
      throw ArgumentError("bad flight kind: " + kind);
    }
    return f;
  }
  if (state == "loose") {
    return ball::Loose{Get2(j, "x", "y"), Get2(j, "vx", "vy")};
  }
  throw ArgumentError("bad ball state: " + state);
}

std::string_view PhaseName(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::kFaceoff:
      return "faceoff";
    case PhaseKind::kPlay:
      return "play";
    case PhaseKind::kFinished:
      return "finished";
  }
  return "?";
}

Json EventToJson(const GameEvent& e) {
  Json j{{"kind", EventName(e.kind)}, {"tick", e.tick}};
  switch (e.kind) {
    case EventKind::kGoal:
    case EventKind::kShotTaken:
    case EventKind::kShotMissed:
      j["player"] = ToString(e.player);
      break;
    case EventKind::kShotBlocked:
      j["player"] = ToString(e.player);
      j["shooter"] = ToString(e.other);
      break;
    case EventKind::kPossessionGained:
      j["player"] = ToString(e.player);
      j["prior"] = ChangeTagName(e.tag);
      break;
    case EventKind::kPossessionLost:
      j["player"] = ToString(e.player);
      j["to"] = ChangeTagName(e.tag);
      break;
    case EventKind::kPassCompleted:
      j["from"] = ToString(e.player);
      j["to"] = ToString(e.other);
      break;
    case EventKind::kPassIntercepted:
      j["from"] = ToString(e.player);
      j["by"] = ToString(e.other);
      break;
    case EventKind::kEpisodeEnded:
      j["reason"] = "Timeout";
      break;
  }
  return j;
}

GameEvent EventFromJson(const Json& j) {
  const auto kind = ParseEventKind(j.at("kind").get<std::string>());
  if (!kind) throw ArgumentError("unknown event kind in " + j.dump());
  auto id = [&](const char* key) {
    const auto p = ParsePlayerId(j.at(key).get<std::string>());
    if (!p) throw ArgumentError("bad player id in " + j.dump());
    return *p;
  };
  auto tag = [&](const char* key) {
    const auto t = ParseChangeTag(j.at(key).get<std::string>());
    if (!t) throw ArgumentError("bad change tag in " + j.dump());
    return *t;
  };
  GameEvent e;
  e.kind = *kind;
  e.tick = j.at("tick").get<int>();
  switch (e.kind) {
    case EventKind::kGoal:
    case EventKind::kShotTaken:
    case EventKind::kShotMissed:
      e.player = id("player");
      break;
    case EventKind::kShotBlocked:
      e.player = id("player");
      e.other = id("shooter");
      break;
    case EventKind::kPossessionGained:
      e.player = id("player");
      e.tag = tag("prior");
      break;
    case EventKind::kPossessionLost:
      e.player = id("player");
      e.tag = tag("to");
      break;
    case EventKind::kPassCompleted:
      e.player = id("from");
      e.other = id("to");
      break;
    case EventKind::kPassIntercepted:
      e.player = id("from");
      e.other = id("by");
      break;
    case EventKind::kEpisodeEnded:
      break;
  }
  return e;
}

Json PlayersToJson(const GameState& state) {
  Json players = Json::array();
  const auto owner = PossessionIndicator(state);
  const int k = state.k();
  for (int s = 0; s < 2 * k; ++s) {
    const PlayerId id = PlayerId::FromSlot(s, k);
    const PlayerState& p = state.player(id);
    players.push_back(Json{{"team", TeamName(id.team)},
                           {"index", id.index},
                           {"x", p.pos.x},
                           {"y", p.pos.y},
                           {"vx", p.vel.x},
                           {"vy", p.vel.y},
                           {"has_ball", owner == id}});
  }
  return players;
}

Json ActionsToJson(const ActionSet& actions) {
  Json out = Json::array();
  for (const auto& a : actions) {
    if (a) {
      out.push_back(ActionName(*a));
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

ActionSet ActionsFromJson(const Json& j, int num_players) {
  if (!j.is_array() || static_cast<int>(j.size()) != num_players) {
    throw ArgumentError("action list must have one entry per player");
  }
  ActionSet out(static_cast<std::size_t>(num_players));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (j[i].is_null()) continue;
    const auto a = ParseAction(j[i].get<std::string>());
    if (!a) throw ArgumentError("unknown action " + j[i].dump());
    out[i] = a;
  }
  return out;
}

}  // namespace sts2
