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

// Minimal RFC 6455 pieces: handshake key, server frames, client frame
// decoding. Text and control frames only; no extensions.

#ifndef STS2_SERVER_WEBSOCKET_H_
#define STS2_SERVER_WEBSOCKET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sts2::server {

// base64(SHA1(key + GUID)).
std::string WebSocketAccept(std::string_view client_key);

// Value of `name` (case-insensitive) in an HTTP header block, trimmed.
std::optional<std::string> HttpHeader(std::string_view request,
                                      std::string_view name);

enum class WsOpcode : std::uint8_t {
  kContinuation = 0x0,
  kText = 0x1,
  kBinary = 0x2,
  kClose = 0x8,
  kPing = 0x9,
  kPong = 0xA,
};

// One unmasked, final server frame.
std::string EncodeFrame(WsOpcode opcode, std::string_view payload);

struct WsFrame {
  WsOpcode opcode = WsOpcode::kText;
  bool fin = true;
  std::string payload;  // unmasked
};

// Decodes one frame from the front of `buffer` and erases it. Returns
// nullopt when the buffer holds only part of a frame.
std::optional<WsFrame> DecodeFrame(std::string& buffer);

// Masked client frame, for tests and the bundled client helper.
std::string EncodeClientFrame(WsOpcode opcode, std::string_view payload,
                              std::uint32_t mask);

}  // namespace sts2::server

#endif  // STS2_SERVER_WEBSOCKET_H_
