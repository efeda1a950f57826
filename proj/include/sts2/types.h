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

#ifndef STS2_TYPES_H_
#define STS2_TYPES_H_

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sts2 {

// Error types. Every failure surfaced by the library is one of these.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class LifecycleError : public Error {
 public:
  using Error::Error;
};
class ArgumentError : public Error {
 public:
  using Error::Error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  double Norm() const { return std::hypot(x, y); }
  constexpr double Dot(Vec2 o) const { return x * o.x + y * o.y; }
  bool IsFinite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double Distance(Vec2 a, Vec2 b) { return (a - b).Norm(); }

// Distance from point p to the segment [a, b]; `t` receives the segment
// parameter of the closest point.
double PointSegmentDistance(Vec2 p, Vec2 a, Vec2 b, double* t = nullptr);

// Home attacks toward +y, Away toward -y.
enum class TeamId : std::uint8_t { kHome = 0, kAway = 1 };

constexpr TeamId Opponent(TeamId t) {
  return t == TeamId::kHome ? TeamId::kAway : TeamId::kHome;
}
constexpr double AttackSign(TeamId t) {
  return t == TeamId::kHome ? 1.0 : -1.0;
}
std::string_view TeamName(TeamId t);
std::optional<TeamId> ParseTeam(std::string_view s);

struct PlayerId {
  TeamId team = TeamId::kHome;
  int index = 0;

  constexpr auto operator<=>(const PlayerId&) const = default;

  // Dense slot index: Home 0..k-1 then Away 0..k-1.
  constexpr int Slot(int k) const {
    return static_cast<int>(team) * k + index;
  }
  static constexpr PlayerId FromSlot(int slot, int k) {
    return {slot < k ? TeamId::kHome : TeamId::kAway, slot % k};
  }
};

// "home#0", "away#1".
std::string ToString(PlayerId p);
std::optional<PlayerId> ParsePlayerId(std::string_view s);

// Loose-ball tie-break order: lowest index first, Home before Away.
constexpr bool ClaimsBefore(PlayerId a, PlayerId b) {
  if (a.index != b.index) return a.index < b.index;
  return a.team < b.team;
}

enum class Action : std::uint8_t {
  kLeft = 0,
  kRight = 1,
  kForward = 2,
  kBackward = 3,
  kPass = 4,
  kShoot = 5,
};
inline constexpr int kNumActions = 6;
inline constexpr std::array<Action, kNumActions> kAllActions = {
    Action::kLeft,     Action::kRight, Action::kForward,
    Action::kBackward, Action::kPass,  Action::kShoot};

constexpr bool IsMovement(Action a) {
  return a == Action::kLeft || a == Action::kRight ||
         a == Action::kForward || a == Action::kBackward;
}

// "Left", "Right", "Forward", "Backward", "Pass", "Shoot".
std::string_view ActionName(Action a);
std::optional<Action> ParseAction(std::string_view s);

}  // namespace sts2

#endif  // STS2_TYPES_H_
