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

#include "sts2/server/websocket.h"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cctype>

namespace sts2::server {
namespace {

constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void AppendLength(std::string& out, std::uint8_t first_bits, std::size_t n) {
  if (n < 126) {
    out.push_back(static_cast<char>(first_bits | n));
  } else if (n <= 0xFFFF) {
    out.push_back(static_cast<char>(first_bits | 126));
    out.push_back(static_cast<char>((n >> 8) & 0xFF));
    out.push_back(static_cast<char>(n & 0xFF));
  } else {
    out.push_back(static_cast<char>(first_bits | 127));
    for (int i = 7; i >= 0; --i) {
      out.push_back(static_cast<char>((static_cast<std::uint64_t>(n) >> (8 * i)) & 0xFF));
    }
  }
}

}  // namespace

std::string WebSocketAccept(std::string_view client_key) {
  const std::string input = std::string(client_key) + std::string(kGuid);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(input.data()), input.size(),
       digest);
  unsigned char b64[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
  const int n = EVP_EncodeBlock(b64, digest, SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<const char*>(b64),
                     static_cast<std::size_t>(n));
}

std::optional<std::string> HttpHeader(std::string_view request,
                                      std::string_view name) {
  const std::string want = Lower(name);
  std::size_t pos = request.find('\n');
  while (pos != std::string_view::npos && pos + 1 < request.size()) {
    const std::size_t start = pos + 1;
    const std::size_t end = request.find('\n', start);
    const std::string_view line = request.substr(
        start, end == std::string_view::npos ? std::string_view::npos
                                             : end - start);
    const std::size_t colon = line.find(':');
    if (colon != std::string_view::npos &&
        Lower(Trim(line.substr(0, colon))) == want) {
      return Trim(line.substr(colon + 1));
    }
    pos = end;
  }
  return std::nullopt;
}

std::string EncodeFrame(WsOpcode opcode, std::string_view payload) {
  std::string out;
  out.reserve(payload.size() + 10);
  out.push_back(static_cast<char>(0x80 | static_cast<std::uint8_t>(opcode)));
  AppendLength(out, 0x00, payload.size());
  out.append(payload);
  return out;
}

std::string EncodeClientFrame(WsOpcode opcode, std::string_view payload,
                              std::uint32_t mask) {
  std::string out;
  out.push_back(static_cast<char>(0x80 | static_cast<std::uint8_t>(opcode)));
  AppendLength(out, 0x80, payload.size());
  const std::uint8_t key[4] = {
      static_cast<std::uint8_t>(mask >> 24), static_cast<std::uint8_t>(mask >> 16),
      static_cast<std::uint8_t>(mask >> 8), static_cast<std::uint8_t>(mask)};
  for (std::uint8_t k : key) out.push_back(static_cast<char>(k));
  for (std::size_t i = 0; i < payload.size(); ++i) {
    out.push_back(static_cast<char>(payload[i] ^ key[i % 4]));
  }
  return out;
}

std::optional<WsFrame> DecodeFrame(std::string& buffer) {
  const auto byte = [&](std::size_t i) {
    return static_cast<std::uint8_t>(buffer[i]);
  };
  if (buffer.size() < 2) return std::nullopt;
  WsFrame frame;
  frame.fin = (byte(0) & 0x80) != 0;
  frame.opcode = static_cast<WsOpcode>(byte(0) & 0x0F);
  const bool masked = (byte(1) & 0x80) != 0;
  std::uint64_t len = byte(1) & 0x7F;
  std::size_t pos = 2;
  if (len == 126) {
    if (buffer.size() < 4) return std::nullopt;
    len = (std::uint64_t{byte(2)} << 8) | byte(3);
    pos = 4;
  } else if (len == 127) {
    if (buffer.size() < 10) return std::nullopt;
    len = 0;
    for (int i = 0; i < 8; ++i) len = (len << 8) | byte(2 + i);
    pos = 10;
  }
  std::uint8_t key[4] = {0, 0, 0, 0};
  if (masked) {
    if (buffer.size() < pos + 4) return std::nullopt;
    for (int i = 0; i < 4; ++i) key[i] = byte(pos + i);
    pos += 4;
  }
  if (buffer.size() - pos < len) return std::nullopt;
  frame.payload = buffer.substr(pos, len);
  if (masked) {
    for (std::size_t i = 0; i < frame.payload.size(); ++i) {
      frame.payload[i] = static_cast<char>(frame.payload[i] ^ key[i % 4]);
    }
  }
  buffer.erase(0, pos + len);
  return frame;
}

}  // namespace sts2::server
