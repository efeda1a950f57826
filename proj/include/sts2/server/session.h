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


// Transport-free match session: the protocol state machine behind the
// match server. One session owns one match; the caller feeds client
// messages in arrival order, calls Tick at the pacing rate and forwards the
// queued outgoing messages.
//
// Client -> server (one JSON object per message):
//   {"type":"hello","name":s}
//   {"type":"assign","slot":{"team":"home"|"away","index":n}}
//   {"type":"input","action":"Left|Right|Forward|Backward|Pass|Shoot"}
//   {"type":"control","cmd":"start"|"pause"|"reset"}
// Server -> client, each with a session-wide increasing "seq":
//   welcome, assigned, state, event, error, warning, end.

#ifndef STS2_SERVER_SESSION_H_
#define STS2_SERVER_SESSION_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sts2/game.h"
#include "sts2/harness/evaluate.h"
#include "sts2/harness/experiment.h"
#include "sts2/replay.h"

namespace sts2::server {

using ClientId = int;

struct SessionConfig {
  GameConfig game;
  harness::SlotAssignment slots;  // Human allowed
  double tick_rate = 30.0;        // ticks per second, used by the server loop
  // Start without waiting for the owner. Defaults to "no Human slots".
  std::optional<bool> autostart;
  std::string replay_path;  // empty: no recording
  std::string listen_address = "127.0.0.1";
  int port = 7777;

  // Throws ConfigError.
  void Validate() const;
};

struct Outgoing {
  ClientId client;
  std::string line;  // one JSON object, no trailing newline
  bool disconnect = false;  // close this client after sending
};

class Session {
 public:
  // Live match. Throws ConfigError / CheckpointError.
  explicit Session(SessionConfig config);
  // Spectator playback of a recorded log; no simulation. When
  // `expected_hash` is given and differs from the log header, every client
  // receives a warning on hello.
  Session(Replay replay, double tick_rate,
          std::optional<std::uint64_t> expected_hash = std::nullopt);
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // The first client to connect owns the session.
  ClientId Connect();
  void Disconnect(ClientId client);
  void HandleMessage(ClientId client, std::string_view line);

  // Advances one tick when running; a no-op when paused or finished.
  void Tick();

  std::vector<Outgoing> TakeOutgoing();

  bool running() const { return running_; }
  bool finished() const;
  bool playback() const { return replay_ != nullptr; }
  const GameState& state() const { return state_; }
  const GameConfig& game() const { return config_.game; }
  double tick_rate() const { return config_.tick_rate; }
  std::optional<ClientId> owner() const { return owner_; }
  // Which client holds each Human slot.
  const std::map<PlayerId, ClientId>& bindings() const { return bindings_; }
  // Actions applied on the most recent tick.
  const ActionSet& last_actions() const { return last_actions_; }

 private:
  void Send(ClientId client, Json message, bool disconnect = false);
  void Broadcast(const Json& message);
  void Error(ClientId client, const std::string& msg, bool disconnect = false);
  void OnHello(ClientId client, const Json& m);
  void OnAssign(ClientId client, const Json& m);
  void OnInput(ClientId client, const Json& m);
  void OnControl(ClientId client, const Json& m);
  void BroadcastState();
  void Restart();
  void StepPlayback();

  SessionConfig config_;
  harness::Lineup lineup_;
  GameState state_;
  std::set<ClientId> clients_;
  std::optional<ClientId> owner_;
  ClientId next_client_ = 1;
  std::map<PlayerId, ClientId> bindings_;
  std::map<PlayerId, Action> pending_;
  ActionSet last_actions_;
  std::vector<GameEvent> events_;
  bool running_ = false;
  bool end_sent_ = false;
  std::uint64_t seq_ = 0;
  std::vector<Outgoing> out_;

  std::unique_ptr<std::ostream> replay_file_;
  std::unique_ptr<ReplayWriter> replay_writer_;

  std::unique_ptr<Replay> replay_;
  std::size_t playback_index_ = 0;
  std::optional<std::string> hash_warning_;
};

// The state message body shared with spectators and the browser client.
Json StateMessage(const GameState& state);

}  // namespace sts2::server

#endif  // STS2_SERVER_SESSION_H_
