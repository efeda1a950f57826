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

#include "sts2/server/server.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "sts2/server/websocket.h"

namespace sts2::server {
namespace {

using harness::SlotSpec;

TEST_CASE("websocket accept key matches the RFC example") {
  CHECK(WebSocketAccept("dGhlIHNhbXBsZSBub25jZQ==") ==
        "s3pPLMBiTxaQ9kYGzzhZRbK+xOo=");
}

TEST_CASE("http header lookup is case-insensitive and trimmed") {
  const std::string req =
      "GET /ws HTTP/1.1\r\nHost: x\r\nsec-websocket-key:  abc== \r\n\r\n";
  CHECK(HttpHeader(req, "Sec-WebSocket-Key") == "abc==");
  CHECK(HttpHeader(req, "host") == "x");
  CHECK_FALSE(HttpHeader(req, "Upgrade").has_value());
}

TEST_CASE("frames round-trip across length encodings") {
  for (const std::size_t n : {0u, 5u, 125u, 126u, 300u, 65535u, 70000u}) {
    std::string payload(n, 'a');
    for (std::size_t i = 0; i < n; ++i) payload[i] = static_cast<char>('a' + i % 26);

    std::string server = EncodeFrame(WsOpcode::kText, payload);
    const std::size_t header = n < 126 ? 2 : (n <= 65535 ? 4 : 10);
    CHECK(server.size() == header + n);
    CHECK(static_cast<std::uint8_t>(server[0]) == 0x81);

    std::string client = EncodeClientFrame(WsOpcode::kText, payload, 0xA1B2C3D4);
    CHECK(client.size() == header + 4 + n);
    // Every strict prefix is incomplete and left untouched.
    for (const std::size_t cut : {std::size_t{0}, std::size_t{1}, header,
                                  client.size() - 1}) {
      if (cut >= client.size()) continue;
      std::string part = client.substr(0, cut);
      CHECK_FALSE(DecodeFrame(part).has_value());
      CHECK(part.size() == cut);
    }
    std::string two = client + server;
    const auto a = DecodeFrame(two);
    const auto b = DecodeFrame(two);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->payload == payload);
    CHECK(b->payload == payload);
    CHECK(a->opcode == WsOpcode::kText);
    CHECK(a->fin);
    CHECK(two.empty());
  }
}

// Blocking test client over a loopback socket.
class TestClient {
 public:
  explicit TestClient(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    REQUIRE(::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
    timeval tv{5, 0};
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  }
  ~TestClient() { ::close(fd_); }

  void SendRaw(const std::string& bytes) {
    REQUIRE(::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL) ==
            static_cast<ssize_t>(bytes.size()));
  }
  // False on EOF or timeout.
  bool Fill() {
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (n <= 0) return false;
    buffer_.append(chunk, static_cast<std::size_t>(n));
    return true;
  }
  std::optional<Json> NextLine() {
    for (;;) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        Json j = Json::parse(buffer_.substr(0, nl));
        buffer_.erase(0, nl + 1);
        return j;
      }
      if (!Fill()) return std::nullopt;
    }
  }
  std::optional<Json> NextFrame() {
    for (;;) {
      if (auto f = DecodeFrame(buffer_)) return Json::parse(f->payload);
      if (!Fill()) return std::nullopt;
    }
  }
  std::string& buffer() { return buffer_; }

 private:
  int fd_ = -1;
  std::string buffer_;
};

SessionConfig HumanGame() {
  SessionConfig c;
  c.game.k = 1;
  c.game.episode_length = 200;
  c.game.seed = 4;
  c.slots = {SlotSpec::Human(), SlotSpec::Scripted()};
  c.tick_rate = 200.0;
  return c;
}

TEST_CASE("raw line clients: hello, assign, play, malformed isolation") {
  MatchServer server(std::make_unique<Session>(HumanGame()), "127.0.0.1", 0);
  CHECK(server.port() > 0);
  std::thread loop([&] { server.Run(); });

  TestClient owner(server.port());
  owner.SendRaw("{\"type\":\"hello\",\"name\":\"p1\"}\n");
  auto welcome = owner.NextLine();
  REQUIRE(welcome.has_value());
  CHECK((*welcome)["type"] == "welcome");
  CHECK((*welcome)["owner"] == true);

  TestClient rude(server.port());
  rude.SendRaw("{\"type\":\"hello\",\"name\":\"p2\"}\n");
  REQUIRE(rude.NextLine().has_value());
  rude.SendRaw("this is not json\n");
  auto err = rude.NextLine();
  REQUIRE(err.has_value());
  CHECK((*err)["type"] == "error");
  CHECK_FALSE(rude.NextLine().has_value());  // disconnected

  owner.SendRaw(
      "{\"type\":\"assign\",\"slot\":{\"team\":\"home\",\"index\":0}}\n"
      "{\"type\":\"control\",\"cmd\":\"start\"}\n");
  auto assigned = owner.NextLine();
  REQUIRE(assigned.has_value());
  CHECK((*assigned)["type"] == "assigned");
  int last_tick = -1;
  bool ended = false;
  std::uint64_t last_seq = (*assigned)["seq"].get<std::uint64_t>();
  while (auto m = owner.NextLine()) {
    CHECK((*m)["seq"].get<std::uint64_t>() > last_seq);
    last_seq = (*m)["seq"].get<std::uint64_t>();
    if ((*m)["type"] == "state") {
      CHECK((*m)["tick"].get<int>() > last_tick);
      last_tick = (*m)["tick"].get<int>();
      if (last_tick == 10) owner.SendRaw("{\"type\":\"input\",\"action\":\"Forward\"}\n");
    }
    if ((*m)["type"] == "end") {
      ended = true;
      break;
    }
  }
  CHECK(ended);
  CHECK(last_tick == 200);
  server.Stop();
  loop.join();
}

TEST_CASE("websocket clients receive one JSON object per text frame") {
  SessionConfig c = HumanGame();
  MatchServer server(std::make_unique<Session>(c), "127.0.0.1", 0);
  std::thread loop([&] { server.Run(); });

  TestClient ws(server.port());
  ws.SendRaw(
      "GET /ws HTTP/1.1\r\nHost: localhost\r\nUpgrade: websocket\r\n"
      "Connection: Upgrade\r\nSec-WebSocket-Key: dGhlIHNhbXBsZSBub25jZQ==\r\n"
      "Sec-WebSocket-Version: 13\r\n\r\n");
  while (ws.buffer().find("\r\n\r\n") == std::string::npos) REQUIRE(ws.Fill());
  const std::size_t end = ws.buffer().find("\r\n\r\n") + 4;
  const std::string response = ws.buffer().substr(0, end);
  ws.buffer().erase(0, end);
  CHECK(response.starts_with("HTTP/1.1 101"));
  CHECK(HttpHeader(response, "Sec-WebSocket-Accept") ==
        "s3pPLMBiTxaQ9kYGzzhZRbK+xOo=");

  ws.SendRaw(EncodeClientFrame(WsOpcode::kText,
                               R"({"type":"hello","name":"browser"})", 0x1234));
  auto welcome = ws.NextFrame();
  REQUIRE(welcome.has_value());
  CHECK((*welcome)["type"] == "welcome");
  ws.SendRaw(EncodeClientFrame(
      WsOpcode::kText, R"({"type":"assign","slot":{"team":"home","index":0}})", 7));
  ws.SendRaw(EncodeClientFrame(WsOpcode::kText,
                               R"({"type":"control","cmd":"start"})", 9));
  int states = 0;
  while (auto m = ws.NextFrame()) {
    if ((*m)["type"] == "state" && ++states == 5) break;
  }
  CHECK(states == 5);
  server.Stop();
  loop.join();
}

TEST_CASE("headless serve exits when finished and leaves a valid log") {
  SessionConfig c;
  c.game.k = 2;
  c.game.episode_length = 150;
  c.game.seed = 12;
  c.slots.assign(4, SlotSpec::Scripted());
  c.tick_rate = 5000.0;
  c.replay_path =
      (std::filesystem::temp_directory_path() / "sts2_server_headless.ndjson").string();
  {
    MatchServer server(std::make_unique<Session>(c), "127.0.0.1", 0);
    server.Run(/*exit_when_finished=*/true);
    CHECK(server.session().finished());
  }
  CHECK(LoadReplay(c.replay_path).frames.size() == 150);
}

TEST_CASE("bind failures are reported") {
  SessionConfig c = HumanGame();
  MatchServer first(std::make_unique<Session>(c), "127.0.0.1", 0);
  CHECK_THROWS_AS(MatchServer(std::make_unique<Session>(c), "127.0.0.1", first.port()),
                  ServerError);
  CHECK_THROWS_AS(MatchServer(std::make_unique<Session>(c), "not-an-ip", 0),
                  ServerError);
}

}  // namespace
}  // namespace sts2::server
