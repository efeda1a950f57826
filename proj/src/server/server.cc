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
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "sts2/server/websocket.h"

namespace sts2::server {
namespace {

using Clock = std::chrono::steady_clock;

// A client that stays silent this long after connecting is treated as a
// line-oriented client.
constexpr int kSniffMillis = 200;
constexpr std::size_t kMaxLine = 1 << 20;

bool SendAll(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

}  // namespace

struct MatchServer::Connection {
  explicit Connection(int fd) : fd(fd) {}
  ~Connection() { ::close(fd); }

  void Write(std::string_view line) {
    std::lock_guard<std::mutex> lock(write_mu);
    if (closed) return;
    bool ok;
    if (websocket) {
      ok = SendAll(fd, EncodeFrame(WsOpcode::kText, line));
    } else {
      std::string framed(line);
      framed.push_back('\n');
      ok = SendAll(fd, framed);
    }
    if (!ok) closed = true;
  }
  void WriteRaw(std::string_view bytes) {
    std::lock_guard<std::mutex> lock(write_mu);
    if (!closed && !SendAll(fd, bytes)) closed = true;
  }
  void Close() {
    std::lock_guard<std::mutex> lock(write_mu);
    closed = true;
    ::shutdown(fd, SHUT_RDWR);
  }

  const int fd;
  int id = 0;
  std::atomic<bool> websocket{false};
  std::mutex write_mu;
  bool closed = false;
};

MatchServer::MatchServer(std::unique_ptr<Session> session,
                         const std::string& address, int port)
    : session_(std::move(session)) {
  if (!session_) throw ServerError("server: null session");
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw ServerError("socket: " + std::string(std::strerror(errno)));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, address.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw ServerError("invalid listen address \"" + address + "\"");
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
      ::listen(listen_fd_, 16) < 0) {
    const std::string err = std::strerror(errno);
    ::close(listen_fd_);
    throw ServerError("cannot listen on " + address + ":" +
                      std::to_string(port) + ": " + err);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  accept_thread_ = std::thread([this] { AcceptLoop(); });
}

MatchServer::~MatchServer() {
  Stop();
  ::shutdown(listen_fd_, SHUT_RDWR);
  if (accept_thread_.joinable()) accept_thread_.join();
  CloseAll();
  std::vector<std::thread> readers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    readers.swap(readers_);
  }
  for (auto& t : readers) t.join();
  ::close(listen_fd_);
}

void MatchServer::Stop() {
  stop_ = true;
  cv_.notify_all();
}

void MatchServer::AcceptLoop() {
  while (!stop_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;  // listener shut down
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    auto conn = std::make_shared<Connection>(fd);
    std::lock_guard<std::mutex> lock(mu_);
    if (stop_) return;
    conn->id = next_conn_++;
    conns_[conn->id] = conn;
    readers_.emplace_back([this, conn] { ReadLoop(conn); });
  }
}

void MatchServer::ReadLoop(std::shared_ptr<Connection> conn) {
  std::string buffer;
  char chunk[4096];
  const auto read_some = [&]() {
    for (;;) {
      const ssize_t n = ::recv(conn->fd, chunk, sizeof(chunk), 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) return false;
      buffer.append(chunk, static_cast<std::size_t>(n));
      return true;
    }
  };
  const auto finish = [&] { Push({EventKind::kDisconnect, conn->id, ""}); };

  // Sniff for an HTTP upgrade.
  pollfd pfd{conn->fd, POLLIN, 0};
  if (::poll(&pfd, 1, kSniffMillis) > 0) {
    if (!read_some()) {
      Push({EventKind::kConnect, conn->id, ""});
      return finish();
    }
    while (buffer.size() < 4 && std::string_view("GET ").starts_with(buffer)) {
      if (!read_some()) break;
    }
    if (buffer.starts_with("GET ")) {
      while (buffer.find("\r\n\r\n") == std::string::npos) {
        if (buffer.size() > 65536 || !read_some()) {
          conn->Close();
          return finish();
        }
      }
      const std::size_t end = buffer.find("\r\n\r\n") + 4;
      const std::string request = buffer.substr(0, end);
      buffer.erase(0, end);
      const auto key = HttpHeader(request, "Sec-WebSocket-Key");
      if (!key) {
        conn->WriteRaw(
            "HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\n"
            "Connection: close\r\n\r\n");
        conn->Close();
        return finish();
      }
      conn->WriteRaw("HTTP/1.1 101 Switching Protocols\r\n"
                     "Upgrade: websocket\r\nConnection: Upgrade\r\n"
                     "Sec-WebSocket-Accept: " + WebSocketAccept(*key) +
                     "\r\n\r\n");
      conn->websocket = true;
    }
  }
  Push({EventKind::kConnect, conn->id, ""});

  if (conn->websocket) {
    std::string message;
    for (;;) {
      while (auto frame = DecodeFrame(buffer)) {
        switch (frame->opcode) {
          case WsOpcode::kText:
          case WsOpcode::kBinary:
          case WsOpcode::kContinuation:
            message += frame->payload;
            if (frame->fin) {
              Push({EventKind::kMessage, conn->id, std::move(message)});
              message.clear();
            }
            break;
          case WsOpcode::kPing:
            conn->WriteRaw(EncodeFrame(WsOpcode::kPong, frame->payload));
            break;
          case WsOpcode::kClose:
            conn->WriteRaw(EncodeFrame(WsOpcode::kClose, ""));
            return finish();
          default:
            break;
        }
      }
      if (!read_some()) return finish();
    }
  }

  for (;;) {
    std::size_t nl;
    while ((nl = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      Push({EventKind::kMessage, conn->id, std::move(line)});
    }
    if (buffer.size() > kMaxLine || !read_some()) return finish();
  }
}

void MatchServer::Push(InboxEvent event) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    inbox_.push_back(std::move(event));
  }
  cv_.notify_all();
}

void MatchServer::DrainInbox() {
  std::deque<InboxEvent> events;
  {
    std::lock_guard<std::mutex> lock(mu_);
    events.swap(inbox_);
  }
  for (InboxEvent& e : events) {
    switch (e.kind) {
      case EventKind::kConnect: {
        const ClientId client = session_->Connect();
        conn_to_client_[e.conn] = client;
        client_to_conn_[client] = e.conn;
        break;
      }
      case EventKind::kMessage: {
        const auto it = conn_to_client_.find(e.conn);
        if (it != conn_to_client_.end()) session_->HandleMessage(it->second, e.line);
        Flush();
        break;
      }
      case EventKind::kDisconnect: {
        const auto it = conn_to_client_.find(e.conn);
        if (it != conn_to_client_.end()) {
          session_->Disconnect(it->second);
          client_to_conn_.erase(it->second);
          conn_to_client_.erase(it);
        }
        std::lock_guard<std::mutex> lock(mu_);
        conns_.erase(e.conn);
        break;
      }
    }
  }
}

void MatchServer::Flush() {
  for (const Outgoing& o : session_->TakeOutgoing()) {
    const auto cit = client_to_conn_.find(o.client);
    if (cit == client_to_conn_.end()) continue;
    std::shared_ptr<Connection> conn;
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto it = conns_.find(cit->second);
      if (it != conns_.end()) conn = it->second;
    }
    if (!conn) continue;
    conn->Write(o.line);
    if (o.disconnect) {
      session_->Disconnect(o.client);
      conn_to_client_.erase(cit->second);
      client_to_conn_.erase(cit);
      conn->Close();
    }
  }
}

void MatchServer::CloseAll() {
  std::lock_guard<std::mutex> lock(mu_);
  for (auto& [id, conn] : conns_) conn->Close();
}

void MatchServer::Run(bool exit_when_finished) {
  const auto period = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(1.0 / session_->tick_rate()));
  auto next = Clock::now() + period;
  while (!stop_) {
    DrainInbox();
    Flush();
    const auto now = Clock::now();
    if (now >= next) {
      session_->Tick();
      Flush();
      next += period;
      // Never burst to catch up after a stall.
      if (next < now) next = now + period;
    }
    if (exit_when_finished && session_->finished() && !session_->running()) break;
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait_until(lock, next, [&] { return stop_ || !inbox_.empty(); });
  }
  CloseAll();
}

}  // namespace sts2::server
