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


#include "sts2/server/session.h"

#include <fstream>

namespace sts2::server {
namespace {

bool HasHuman(const harness::SlotAssignment& slots) {
  for (const harness::SlotSpec& s : slots) {
    if (s.kind == harness::SlotKind::kHuman) return true;
  }
  return false;
}

}  // namespace

void SessionConfig::Validate() const {
  game.Validate();
  harness::ValidateSlots(game, slots, /*allow_human=*/true);
  if (!(tick_rate > 0.0)) throw ConfigError("tick_rate must be > 0");
  if (port < 0 || port > 65535) throw ConfigError("port out of range");
}

Json StateMessage(const GameState& state) {
  Json ball = BallToJson(state.ball);
  const Vec2 at = state.BallPosition();
  ball["x"] = at.x;
  ball["y"] = at.y;
  return Json{{"type", "state"},
              {"tick", state.tick},
              {"players", PlayersToJson(state)},
              {"ball", std::move(ball)},
              {"score", {{"home", state.score[0]}, {"away", state.score[1]}}},
              {"phase", PhaseName(state.phase.kind)}};
}

Session::Session(SessionConfig config) : config_(std::move(config)) {
  config_.Validate();
  lineup_ = harness::Lineup::Build(config_.game, config_.slots);
  running_ = config_.autostart.value_or(!HasHuman(config_.slots));
  Restart();
}

Session::Session(Replay replay, double tick_rate,
                 std::optional<std::uint64_t> expected_hash) {
  if (!(tick_rate > 0.0)) throw ConfigError("tick_rate must be > 0");
  config_.game = replay.config;
  config_.tick_rate = tick_rate;
  config_.slots.assign(static_cast<std::size_t>(2 * replay.config.k),
                       harness::SlotSpec::Scripted());
  if (expected_hash && *expected_hash != replay.config_hash) {
    hash_warning_ = "replay config hash " + HexU64(replay.config_hash) +
                    " does not match requested " + HexU64(*expected_hash);
  }
  state_ = NewMatch(replay.config);
  last_actions_.assign(static_cast<std::size_t>(config_.game.num_players()),
                       std::nullopt);
  replay_ = std::make_unique<Replay>(std::move(replay));
  running_ = true;
}

Session::~Session() {
  if (replay_file_) replay_file_->flush();
}

void Session::Restart() {
  state_ = NewMatch(config_.game);
  pending_.clear();
  last_actions_.assign(static_cast<std::size_t>(config_.game.num_players()),
                       std::nullopt);
  end_sent_ = false;
  if (!config_.replay_path.empty()) {
    replay_writer_.reset();
    replay_file_.reset();  // close before truncating the same path
    replay_file_ = std::make_unique<std::ofstream>(config_.replay_path,
                                                   std::ios::trunc);
    if (!*replay_file_) {
      throw ConfigError("cannot write replay to " + config_.replay_path);
    }
    replay_writer_ = std::make_unique<ReplayWriter>(*replay_file_, config_.game);
  }
}

bool Session::finished() const {
  if (replay_) return playback_index_ >= replay_->frames.size();
  return state_.phase.kind == PhaseKind::kFinished;
}

ClientId Session::Connect() {
  const ClientId id = next_client_++;
  clients_.insert(id);
  if (!owner_) owner_ = id;
  return id;
}

void Session::Disconnect(ClientId client) {
  if (!clients_.erase(client)) return;
  for (auto it = bindings_.begin(); it != bindings_.end();) {
    if (it->second == client) {
      pending_.erase(it->first);
      it = bindings_.erase(it);
    } else {
      ++it;
    }
  }
  // Ownership passes to the longest-connected remaining client.
  if (owner_ == client) {
    owner_.reset();
    if (!clients_.empty()) owner_ = *clients_.begin();
  }
}

void Session::Send(ClientId client, Json message, bool disconnect) {
  message["seq"] = ++seq_;
  out_.push_back({client, message.dump(), disconnect});
}

void Session::Broadcast(const Json& message) {
  Json m = message;
  m["seq"] = ++seq_;
  const std::string line = m.dump();
  for (ClientId c : clients_) out_.push_back({c, line, false});
}

void Session::Error(ClientId client, const std::string& msg, bool disconnect) {
  Send(client, Json{{"type", "error"}, {"msg", msg}}, disconnect);
}

std::vector<Outgoing> Session::TakeOutgoing() {
  std::vector<Outgoing> out;
  out.swap(out_);
  return out;
}

void Session::HandleMessage(ClientId client, std::string_view line) {
  if (!clients_.count(client)) return;
  Json m;
  try {
    m = Json::parse(line);
  } catch (const Json::exception&) {
    Error(client, "malformed JSON", /*disconnect=*/true);
    return;
  }
  if (!m.is_object() || !m.contains("type") || !m.at("type").is_string()) {
    Error(client, "message needs a string \"type\"", /*disconnect=*/true);
    return;
  }
  const std::string type = m.at("type").get<std::string>();
  try {
    if (type == "hello") {
      OnHello(client, m);
    } else if (type == "assign") {
      OnAssign(client, m);
    } else if (type == "input") {
      OnInput(client, m);
    } else if (type == "control") {
      OnControl(client, m);
    } else {
      Error(client, "unknown message type \"" + type + "\"");
    }
  } catch (const Json::exception&) {
    Error(client, "malformed " + type + " message");
  }
}

void Session::OnHello(ClientId client, const Json& m) {
  Json slots = Json::array();
  const int k = config_.game.k;
  for (int s = 0; s < 2 * k; ++s) {
    const PlayerId id = PlayerId::FromSlot(s, k);
    slots.push_back(Json{
        {"team", TeamName(id.team)},
        {"index", id.index},
        {"kind", harness::SlotKindName(
                     config_.slots[static_cast<std::size_t>(s)].kind)},
        {"bound", bindings_.count(id) > 0}});
  }
  Send(client, Json{{"type", "welcome"},
                    {"client", client},
                    {"name", m.value("name", std::string())},
                    {"owner", owner_ == client},
                    {"playback", playback()},
                    {"tick_rate", config_.tick_rate},
                    {"config_hash", HexU64(ConfigHash(config_.game))},
                    {"config", ConfigToJson(config_.game)},
                    {"slots", std::move(slots)}});
  if (hash_warning_) Send(client, Json{{"type", "warning"}, {"msg", *hash_warning_}});
}

void Session::OnAssign(ClientId client, const Json& m) {
  if (playback()) return Error(client, "playback session has no slots");
  const Json& slot = m.at("slot");
  const auto team = ParseTeam(slot.at("team").get<std::string>());
  const int index = slot.at("index").get<int>();
  if (!team || index < 0 || index >= config_.game.k) {
    return Error(client, "invalid slot");
  }
  const PlayerId id{*team, index};
  if (config_.slots[static_cast<std::size_t>(id.Slot(config_.game.k))].kind !=
      harness::SlotKind::kHuman) {
    return Error(client, "slot is not a human slot");
  }
  const auto it = bindings_.find(id);
  if (it != bindings_.end()) {
    return Error(client, it->second == client ? "slot already yours" : "slot taken");
  }
  for (const auto& [p, c] : bindings_) {
    if (c == client) return Error(client, "client already holds " + ToString(p));
  }
  bindings_[id] = client;
  Send(client, Json{{"type", "assigned"}, {"slot", PlayerIdToJson(id)}});
}

void Session::OnInput(ClientId client, const Json& m) {
  if (playback()) return Error(client, "playback session takes no input");
  const std::string name = m.at("action").get<std::string>();
  const auto action = ParseAction(name);
  if (!action) return Error(client, "unknown action \"" + name + "\"");
  for (const auto& [p, c] : bindings_) {
    if (c == client) {
      pending_[p] = *action;  // the latest input before the tick wins
      return;
    }
  }
  Error(client, "no slot assigned");
}

void Session::OnControl(ClientId client, const Json& m) {
  const std::string cmd = m.at("cmd").get<std::string>();
  if (owner_ != client) return Error(client, "only the session owner may " + cmd);
  if (cmd == "start") {
    if (finished()) return Error(client, "match finished; reset first");
    running_ = true;
  } else if (cmd == "pause") {
    running_ = false;
    if (replay_file_) replay_file_->flush();
  } else if (cmd == "reset") {
    if (playback()) {
      playback_index_ = 0;
      state_ = NewMatch(config_.game);
      end_sent_ = false;
    } else {
      Restart();
    }
    running_ = false;
    BroadcastState();
  } else {
    Error(client, "unknown control command \"" + cmd + "\"");
  }
}

void Session::BroadcastState() { Broadcast(StateMessage(state_)); }

void Session::StepPlayback() {
  const ReplayFrame& f = replay_->frames[playback_index_++];
  state_ = f.state;
  last_actions_ = f.actions;
  for (const GameEvent& e : f.events) {
    Json j = EventToJson(e);
    j["type"] = "event";
    Broadcast(j);
  }
  BroadcastState();
}

void Session::Tick() {
  if (!running_) return;
  if (!finished()) {
    if (playback()) {
      StepPlayback();
    } else {
      ActionSet actions(static_cast<std::size_t>(config_.game.num_players()));
      lineup_.Act(config_.game, state_, actions);
      for (const auto& [p, a] : pending_) {
        actions[static_cast<std::size_t>(p.Slot(config_.game.k))] = a;
      }
      pending_.clear();
      StepInPlace(config_.game, state_, actions, events_);
      last_actions_ = actions;
      if (replay_writer_) replay_writer_->Record(state_, events_, actions);
      for (const GameEvent& e : events_) {
        Json j = EventToJson(e);
        j["type"] = "event";
        Broadcast(j);
      }
      BroadcastState();
    }
  }
  if (finished() && !end_sent_) {
    end_sent_ = true;
    running_ = false;
    if (replay_file_) replay_file_->flush();
    Broadcast(Json{{"type", "end"},
                   {"tick", state_.tick},
                   {"score", {{"home", state_.score[0]}, {"away", state_.score[1]}}}});
  }
}

}  // namespace sts2::server
