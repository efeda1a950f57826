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


#include "sts2/scripted_ai.h"

#include <cmath>

#include "doctest.h"
#include "test_util.h"

namespace sts2 {
namespace {

constexpr PlayerId kHome0{TeamId::kHome, 0};
constexpr PlayerId kAway0{TeamId::kAway, 0};

GameState PlayState(const GameConfig& c) {
  GameState s = NewMatch(c);
  s.phase = {PhaseKind::kPlay, 0};
  return s;
}

// Independent restatement of the shoot precondition.
bool ShootOracle(const GameConfig& c, const GameState& s, PlayerId me,
                 const ScriptedProfile& p) {
  if (PossessionIndicator(s) != me) return false;
  const Vec2 pos = s.player(me).pos;
  const Vec2 goal{0.0, AttackSign(me.team) * c.half_length};
  const double dx = goal.x - pos.x;
  const double dy = goal.y - pos.y;
  if (std::sqrt(dx * dx + dy * dy) > p.shoot_range) return false;
  const double len2 = dx * dx + dy * dy;
  for (int i = 0; i < s.k(); ++i) {
    const Vec2 q = s.player({Opponent(me.team), i}).pos;
    double t = len2 > 0 ? ((q.x - pos.x) * dx + (q.y - pos.y) * dy) / len2 : 0;
    t = std::clamp(t, 0.0, 1.0);
    const double ex = pos.x + t * dx - q.x;
    const double ey = pos.y + t * dy - q.y;
    if (std::sqrt(ex * ex + ey * ey) < p.open_lane_clearance) return false;
  }
  return true;
}

TEST_CASE("carrier near goal with an open lane shoots") {
  GameConfig c;
  GameState s = PlayState(c);
  s.player(kHome0).pos = {0.0, 0.85 * c.half_length};
  s.player(kAway0).pos = {0.0, 0.3};  // behind the carrier
  s.ball = ball::Controlled{kHome0};
  const ScriptedProfile p;
  REQUIRE(ShootOracle(c, s, kHome0, p));
  const ScriptedDecision d = ScriptedDecide(c, s, kHome0, p);
  CHECK(d.action == Action::kShoot);
  CHECK(d.rule == ScriptedRule::kShoot);

  // The same play for Away attacks the other end.
  GameState m = testing::MirrorState(s);
  CHECK(ScriptedAction(c, m, kAway0, p) == Action::kShoot);
}

TEST_CASE("defender does not chase a carrier in the carrier's own half") {
  GameConfig c;
  GameState s = PlayState(c);
  // Away attacks toward -y, so its own half is y > 0.
  s.player(kAway0).pos = {0.1, 0.5 * c.half_length};
  s.player(kHome0).pos = {0.0, 0.0};
  s.ball = ball::Controlled{kAway0};
  const ScriptedDecision d = ScriptedDecide(c, s, kHome0, {});
  CHECK(d.rule == ScriptedRule::kHoldPost);
  CHECK(MoveDirection(d.action, TeamId::kHome).y <= 0.0);

  // Once the carrier crosses into my half I chase.
  s.player(kAway0).pos = {0.1, -0.3};
  CHECK(ScriptedDecide(c, s, kHome0, {}).rule == ScriptedRule::kChase);
}

TEST_CASE("loose ball nearby: move toward it") {
  GameConfig c;
  GameState s = PlayState(c);
  s.player(kHome0).pos = {0.1, 0.1};
  s.player(kAway0).pos = {-0.4, 0.8};
  const Vec2 ball{0.1 + 0.03, 0.1 - 0.01};
  s.ball = ball::Loose{ball, {}};
  const ScriptedDecision d = ScriptedDecide(c, s, kHome0, {});
  CHECK(d.rule == ScriptedRule::kChaseBall);
  const Vec2 next =
      s.player(kHome0).pos + MoveDirection(d.action, TeamId::kHome) * c.max_speed;
  CHECK(Distance(next, ball) < Distance(s.player(kHome0).pos, ball));
}

TEST_CASE("carrier passes to a better-placed teammate over an open lane") {
  GameConfig c;
  c.k = 2;
  GameState s = PlayState(c);
  const PlayerId h1{TeamId::kHome, 1};
  s.player(kHome0).pos = {-0.3, -0.2};
  s.player(h1).pos = {0.3, 0.3};
  s.player({TeamId::kAway, 0}).pos = {-0.4, 0.9};
  s.player({TeamId::kAway, 1}).pos = {0.4, 0.9};
  s.ball = ball::Controlled{kHome0};
  CHECK(ScriptedDecide(c, s, kHome0, {}).rule == ScriptedRule::kPass);
  // Block the lane and the carrier advances instead.
  s.player({TeamId::kAway, 0}).pos = {0.0, 0.05};
  CHECK(ScriptedDecide(c, s, kHome0, {}).rule == ScriptedRule::kAdvance);
}

TEST_CASE("scripted action is a pure function of its inputs") {
  GameConfig c;
  c.k = 2;
  CounterRng rng(8);
  for (int i = 0; i < 2000; ++i) {
    const GameState s = testing::RandomState(c, rng);
    const GameState copy = s;
    for (int slot = 0; slot < 4; ++slot) {
      const PlayerId me = PlayerId::FromSlot(slot, 2);
      for (Difficulty d : {Difficulty::kEasy, Difficulty::kNormal}) {
        ScriptedProfile p;
        p.difficulty = d;
        REQUIRE(ScriptedDecide(c, s, me, p).action ==
                ScriptedDecide(c, s, me, p).action);
      }
    }
    REQUIRE(s == copy);
  }
}

TEST_CASE("holding defenders never step across the centre line") {
  for (int k : {1, 2, 3}) {
    GameConfig c;
    c.k = k;
    CounterRng rng(40 + static_cast<std::uint64_t>(k));
    int checked = 0;
    for (int i = 0; i < 20000; ++i) {
      GameState s = testing::RandomState(c, rng);
      const PlayerId carrier = PlayerId::FromSlot(
          static_cast<int>(rng.Below(static_cast<std::uint64_t>(2 * k))), k);
      s.ball = ball::Controlled{carrier};
      const TeamId them = carrier.team;
      if (AttackSign(them) * s.player(carrier).pos.y >= 0.0) continue;
      for (int j = 0; j < k; ++j) {
        const PlayerId me{Opponent(them), j};
        const Action a = ScriptedAction(c, s, me, {});
        const double before = AttackSign(me.team) * s.player(me).pos.y;
        const double after =
            before + AttackSign(me.team) *
                         MoveDirection(a, me.team).y * c.max_speed;
        // Whoever is in their own half stays there.
        if (before <= 0.0) REQUIRE(after <= 1e-12);
        // Whoever is past the line may only retreat.
        if (before > 0.0) REQUIRE(after <= before + 1e-12);
        ++checked;
      }
    }
    CHECK(checked > 5000);
  }
}

TEST_CASE("shoot soundness over sampled carrier states") {
  for (int k : {1, 2}) {
    GameConfig c;
    c.k = k;
    const ScriptedProfile p;
    CounterRng rng(70 + static_cast<std::uint64_t>(k));
    int shots = 0;
    for (int i = 0; i < 50000; ++i) {
      GameState s = testing::RandomState(c, rng);
      const PlayerId me = PlayerId::FromSlot(
          static_cast<int>(rng.Below(static_cast<std::uint64_t>(2 * k))), k);
      s.ball = ball::Controlled{me};
      // Pull the carrier into shooting range half of the time.
      if (i % 2 == 0) {
        const double s_y = AttackSign(me.team);
        s.player(me).pos = {rng.Uniform(-0.3, 0.3),
                            s_y * rng.Uniform(0.6, 1.0) * c.half_length};
      }
      const bool oracle = ShootOracle(c, s, me, p);
      const bool shoots = ScriptedAction(c, s, me, p) == Action::kShoot;
      REQUIRE(oracle == shoots);
      shots += shoots;
    }
    CHECK(shots > 1000);
  }
}

TEST_CASE("move toward picks the best single axis, Forward on ties") {
  GameConfig c;
  GameState s = PlayState(c);
  s.player(kHome0).pos = {0.0, 0.0};
  CHECK(MoveToward(c, s, kHome0, {0.0, 0.5}) == Action::kForward);
  CHECK(MoveToward(c, s, kHome0, {0.0, -0.5}) == Action::kBackward);
  CHECK(MoveToward(c, s, kHome0, {0.3, 0.0}) == Action::kRight);
  CHECK(MoveToward(c, s, kHome0, {-0.3, 0.0}) == Action::kLeft);
  CHECK(MoveToward(c, s, kHome0, {0.3, 0.3}) == Action::kForward);
  CHECK(MoveToward(c, s, kHome0, {0.0, 0.5}, false) != Action::kForward);
}

TEST_CASE("defensive post sits on the goal-threat segment") {
  GameConfig c;
  const ScriptedProfile p;
  const Vec2 post = DefensivePost(c, TeamId::kHome, {0.0, 0.5}, p);
  CHECK(post.x == doctest::Approx(0.0));
  CHECK(post.y == doctest::Approx(-c.half_length + p.defend_depth * c.half_length));
  const Vec2 away = DefensivePost(c, TeamId::kAway, {0.0, -0.5}, p);
  CHECK(away.y == doctest::Approx(-post.y));
}

TEST_CASE("profile validation") {
  GameConfig c;
  ScriptedProfile p;
  CHECK_NOTHROW(p.Validate(c));
  p.shoot_range = 2.0;
  CHECK_THROWS_AS(p.Validate(c), ConfigError);
  p = {};
  p.defend_depth = 0.0;
  CHECK_THROWS_AS(p.Validate(c), ConfigError);
}

// The holding quirk is exploitable: a carrier that idles in its own half
// is never challenged by a scripted defender.
TEST_CASE("idle carrier in its own half is never tackled") {
  GameConfig c;
  GameState s = PlayState(c);
  s.player(kHome0).pos = {0.0, -0.6};
  s.player(kAway0).pos = {0.0, 0.6};
  s.ball = ball::Controlled{kHome0};
  std::vector<GameEvent> events;
  for (int t = 0; t < 2000; ++t) {
    ActionSet a(2);
    a[1] = ScriptedAction(c, s, kAway0, {});
    StepInPlace(c, s, a, events);
    REQUIRE(PossessionIndicator(s) == kHome0);
  }
}

}  // namespace
}  // namespace sts2
