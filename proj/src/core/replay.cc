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

#include "sts2/replay.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sts2 {

Json StateToJson(const GameState& s) {
  Json players = Json::array();
  for (const PlayerState& p : s.players) {
    players.push_back(Json::array({p.pos.x, p.pos.y, p.vel.x, p.vel.y}));
  }
  return Json{{"tick", s.tick},
              {"players", std::move(players)},
              {"ball", BallToJson(s.ball)},
              {"score", {{"home", s.score[0]}, {"away", s.score[1]}}},
              {"phase", PhaseName(s.phase.kind)},
              {"countdown", s.phase.countdown},
              {"rng", s.rng.counter()}};
}

GameState StateFromJson(const Json& j, int k) {
  GameState s;
  s.tick = j.at("tick").get<int>();
  const Json& players = j.at("players");
  if (!players.is_array() || static_cast<int>(players.size()) != 2 * k) {
    throw ReplayError("frame has wrong player count");
  }
  for (const Json& p : players) {
    s.players.push_back(PlayerState{{p.at(0).get<double>(), p.at(1).get<double>()},
                                    {p.at(2).get<double>(), p.at(3).get<double>()}});
  }
  s.ball = BallFromJson(j.at("ball"));
  s.score = {j.at("score").at("home").get<int>(),
             j.at("score").at("away").get<int>()};
  const std::string phase = j.at("phase").get<std::string>();
  if (phase == "faceoff") {
    s.phase.kind = PhaseKind::kFaceoff;
  } else if (phase == "play") {
    s.phase.kind = PhaseKind::kPlay;
  } else if (phase == "finished") {
    s.phase.kind = PhaseKind::kFinished;
  } else {
    throw ReplayError("bad phase: " + phase);
  }
  s.phase.countdown = j.at("countdown").get<int>();
  return s;
}

std::string ReplayHeaderLine(const GameConfig& config) {
  const Json header{{"type", "header"},
                    {"format", "sts2-replay"},
                    {"version", kReplayVersion},
                    {"config", ConfigToJson(config)},
                    {"seed", config.seed},
                    {"config_hash", HexU64(ConfigHash(config))}};
  return header.dump();
}

std::string ReplayFrameLine(const GameState& state,
                            const std::vector<GameEvent>& events,
                            const ActionSet& actions) {
  Json frame = StateToJson(state);
  frame["type"] = "tick";
  Json evs = Json::array();
  for (const GameEvent& e : events) evs.push_back(EventToJson(e));
  frame["events"] = std::move(evs);
  frame["actions"] = ActionsToJson(actions);
  return frame.dump();
}

ReplayWriter::ReplayWriter(std::ostream& out, const GameConfig& config)
    : out_(&out) {
  *out_ << ReplayHeaderLine(config) << '\n';
}

void ReplayWriter::Record(const GameState& state,
                          const std::vector<GameEvent>& events,
                          const ActionSet& actions) {
  *out_ << ReplayFrameLine(state, events, actions) << '\n';
}

Replay ParseReplay(std::istream& in) {
  Replay replay;
  std::string line;
  if (!std::getline(in, line)) throw ReplayError("empty replay log");
  try {
    const Json header = Json::parse(line);
    if (header.value("type", "") != "header" ||
        header.value("format", "") != "sts2-replay") {
      throw ReplayError("first record is not an sts2-replay header");
    }
    if (header.at("version").get<int>() != kReplayVersion) {
      throw ReplayError("unsupported replay version");
    }
    ConfigFromJson(header.at("config"), replay.config);
    replay.config.Validate();
    replay.config_hash = std::stoull(
        header.at("config_hash").get<std::string>(), nullptr, 16);
    const int k = replay.config.k;
    int line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const Json j = Json::parse(line);
      if (j.value("type", "") != "tick") {
        throw ReplayError("line " + std::to_string(line_no) +
                          " is not a tick record");
      }
      ReplayFrame frame;
      frame.state = StateFromJson(j, k);
      frame.state.rng = CounterRng(replay.config.seed,
                                   j.at("rng").get<std::uint64_t>());
      for (const Json& e : j.at("events")) {
        frame.events.push_back(EventFromJson(e));
      }
      frame.actions = ActionsFromJson(j.at("actions"), 2 * k);
      replay.frames.push_back(std::move(frame));
    }
  } catch (const ReplayError&) {
    throw;
  } catch (const std::exception& e) {
    throw ReplayError(std::string("corrupt replay log: ") + e.what());
  }
  return replay;
}

Replay LoadReplay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ReplayError("cannot open replay log " + path);
  return ParseReplay(in);
}

std::string RegenerateReplay(const Replay& replay) {
  std::ostringstream out;
  ReplayWriter writer(out, replay.config);
  GameState state = NewMatch(replay.config);
  std::vector<GameEvent> events;
  for (const ReplayFrame& frame : replay.frames) {
    StepInPlace(replay.config, state, frame.actions, events);
    writer.Record(state, events, frame.actions);
  }
  return out.str();
}

}  // namespace sts2
