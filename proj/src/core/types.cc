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

#include "sts2/types.h"

#include <algorithm>
#include <charconv>

namespace sts2 {

double PointSegmentDistance(Vec2 p, Vec2 a, Vec2 b, double* t) {
  const Vec2 ab = b - a;
  const double len2 = ab.Dot(ab);
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp((p - a).Dot(ab) / len2, 0.0, 1.0);
  if (t != nullptr) *t = u;
  return Distance(p, a + ab * u);
}

std::string_view TeamName(TeamId t) {
  return t == TeamId::kHome ? "home" : "away";
}

std::optional<TeamId> ParseTeam(std::string_view s) {
  if (s == "home") return TeamId::kHome;
  if (s == "away") return TeamId::kAway;
  return std::nullopt;
}

std::string ToString(PlayerId p) {
  return std::string(TeamName(p.team)) + "#" + std::to_string(p.index);
}

std::optional<PlayerId> ParsePlayerId(std::string_view s) {
  const auto hash = s.find('#');
  if (hash == std::string_view::npos) return std::nullopt;
  const auto team = ParseTeam(s.substr(0, hash));
  if (!team) return std::nullopt;
  const std::string_view digits = s.substr(hash + 1);
  int index = -1;
  const auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || index < 0) {
    return std::nullopt;
  }
  return PlayerId{*team, index};
}

std::string_view ActionName(Action a) {
  switch (a) {
    case Action::kLeft:
      return "Left";
    case Action::kRight:
      return "Right";
    case Action::kForward:
      return "Forward";
    case Action::kBackward:
      return "Backward";
    case Action::kPass:
      return "Pass";
    case Action::kShoot:
      return "Shoot";
  }
  return "?";
}

std::optional<Action> ParseAction(std::string_view s) {
  for (Action a : kAllActions) {
    if (ActionName(a) == s) return a;
  }
  return std::nullopt;
}

}  // namespace sts2
