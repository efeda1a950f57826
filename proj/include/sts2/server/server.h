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

// TCP front end for a Session. Each connection is either newline-delimited
// JSON or, when it opens with an HTTP GET upgrade, a WebSocket carrying one
// JSON object per text frame. All session calls happen on the thread that
// runs Run(); readers only enqueue.

#ifndef STS2_SERVER_SERVER_H_
#define STS2_SERVER_SERVER_H_

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "sts2/server/session.h"
#include "sts2/types.h"

namespace sts2::server {

class ServerError : public Error {
 public:
  using Error::Error;
};

class MatchServer {
 public:
  // Binds and listens immediately; port 0 picks a free port. Throws
  // ServerError.
  MatchServer(std::unique_ptr<Session> session, const std::string& address,
              int port);
  ~MatchServer();

  MatchServer(const MatchServer&) = delete;
  MatchServer& operator=(const MatchServer&) = delete;

  int port() const { return port_; }

  // Serves until Stop(), or until the match has finished and every end
  // message is flushed when `exit_when_finished`.
  void Run(bool exit_when_finished = false);
  // Safe from any thread.
  void Stop();

  const Session& session() const { return *session_; }

 private:
  struct Connection;
  enum class EventKind { kConnect, kMessage, kDisconnect };
  struct InboxEvent {
    EventKind kind;
    int conn;
    std::string line;
  };

  void AcceptLoop();
  void ReadLoop(std::shared_ptr<Connection> conn);
  void Push(InboxEvent event);
  void DrainInbox();
  void Flush();
  void CloseAll();

  std::unique_ptr<Session> session_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stop_{false};
  std::thread accept_thread_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<InboxEvent> inbox_;
  int next_conn_ = 1;
  std::map<int, std::shared_ptr<Connection>> conns_;  // guarded by mu_
  std::vector<std::thread> readers_;                  // guarded by mu_

  // Loop-thread only.
  std::map<int, ClientId> conn_to_client_;
  std::map<ClientId, int> client_to_conn_;
};

}  // namespace sts2::server

#endif  // STS2_SERVER_SERVER_H_
