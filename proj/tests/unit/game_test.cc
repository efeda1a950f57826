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


#include "sts2/game.h"

#include <cmath>
#include <set>

#include "doctest.h"
#include "test_util.h"

namespace sts2 {
namespace {

using testing::MirrorEvent;
using testing::MirrorState;
using testing::RandomActions;
using testing::RandomState;
using testing::SwapActions;

constexpr PlayerId kHome0{TeamId::kHome, 0};
constexpr PlayerId kAway0{TeamId::kAway, 0};

GameState PlayState(const GameConfig& c) {
  GameState s = NewMatch(c);
  s.phase = {PhaseKind::kPlay, 0};
  return s;
}

ActionSet Idle(const GameConfig& c) {
  return ActionSet(static_cast<std::size_t>(c.num_players()));
}

TEST_CASE("NewMatch 1v1 places mirrored faceoff spots and a centred ball") {
  GameConfig c;
  const GameState s = NewMatch(c);
  CHECK(s.tick == 0);
  CHECK(s.score == std::array<int, 2>{0, 0});
  CHECK(s.phase.kind == PhaseKind::kFaceoff);
  CHECK(s.phase.countdown == c.faceoff_countdown);
  const Vec2 h = s.player(kHome0).pos;
  const Vec2 a = s.player(kAway0).pos;
  CHECK(h.x == a.x);
  CHECK(h.y == -a.y);
  CHECK(h.y < 0.0);
  const auto* loose = std::get_if<ball::Loose>(&s.ball);
  REQUIRE(loose != nullptr);
  CHECK(loose->pos == Vec2{0.0, 0.0});
  CHECK_FALSE(PossessionIndicator(s).has_value());
}

TEST_CASE("NewMatch is deterministic per seed") {
  GameConfig c;
  c.k = 2;
  c.seed = 7;
  CHECK(NewMatch(c) == NewMatch(c));
  c.randomize_start = true;
  CHECK(NewMatch(c) == NewMatch(c));
  GameConfig other = c;
  other.seed = 8;
  CHECK_FALSE(NewMatch(c).players == NewMatch(other).players);
}

TEST_CASE("invalid configs name the violated bound") {
  GameConfig c;
  c.k = 0;
  CHECK_THROWS_WITH_AS(NewMatch(c), doctest::Contains("k >= 1"), ConfigError);
  c = {};
  c.goal_mouth_width = 1.0;
  CHECK_THROWS_WITH_AS(NewMatch(c), doctest::Contains("goal_mouth_width"),
                       ConfigError);
  c = {};
  c.pickup_radius = 0.0;
  CHECK_THROWS_AS(NewMatch(c), ConfigError);
  c = {};
  c.episode_length = 0;
  CHECK_THROWS_AS(NewMatch(c), ConfigError);
  c = {};
  c.friction_coeff = 1.0;
  CHECK_THROWS_AS(NewMatch(c), ConfigError);
}

TEST_CASE("ResetEpisode") {
  GameConfig c;
  c.k = 2;
  SUBCASE("faceoff layout matches NewMatch") {
    GameState s = NewMatch(c);
    for (int t = 0; t < 100; ++t) s = Step(c, s, Idle(c)).state;
    const GameState r = ResetEpisode(s, c);
    const GameState fresh = NewMatch(c);
    CHECK(r.players == fresh.players);
    CHECK(r.ball == fresh.ball);
    CHECK(r.tick == 0);
    CHECK(r.score == fresh.score);
    CHECK(r.phase == fresh.phase);
  }
  SUBCASE("randomized layout is seeded and inside the rink") {
    c.randomize_start = true;
    c.seed = 11;
    GameState a = NewMatch(c);
    GameState b = NewMatch(c);
    for (int i = 0; i < 1000; ++i) {
      a = ResetEpisode(a, c);
      b = ResetEpisode(b, c);
      REQUIRE(a == b);
      for (const PlayerState& p : a.players) {
        REQUIRE(std::abs(p.pos.x) <= c.half_width);
        REQUIRE(std::abs(p.pos.y) <= c.half_length);
        REQUIRE(p.vel.Norm() <= c.max_speed + 1e-9);
      }
      const auto* loose = std::get_if<ball::Loose>(&a.ball);
      REQUIRE(loose != nullptr);
      REQUIRE(std::abs(loose->pos.x) <= c.half_width);
      REQUIRE(std::abs(loose->pos.y) <= c.half_length);
    }
  }
}

TEST_CASE("faceoff freezes play for the countdown") {
  GameConfig c;
  GameState s = NewMatch(c);
  ActionSet forward(2, Action::kForward);
  for (int t = 0; t < c.faceoff_countdown; ++t) {
    const StepResult r = Step(c, s, forward);
    CHECK(r.events.empty());
    CHECK(r.state.players == s.players);
    s = r.state;
  }
  CHECK(s.phase.kind == PhaseKind::kPlay);
  const StepResult moved = Step(c, s, forward);
  CHECK(moved.state.player(kHome0).pos.y > s.player(kHome0).pos.y);
  CHECK(moved.state.player(kAway0).pos.y < s.player(kAway0).pos.y);
}

// Analytic oracle: a shot from p toward the goal centre crosses the line
// y = half_length at x = 0 after ceil(distance / shot_speed) ticks.
TEST_CASE("unopposed shot scores within the analytic flight time") {
  GameConfig c;
  for (const Vec2 from : {Vec2{0.0, 0.8}, Vec2{0.3, 0.6}, Vec2{-0.45, 0.1},
                          Vec2{0.0, -0.9}}) {
    GameState s = PlayState(c);
    s.player(kHome0).pos = from;
    s.player(kAway0).pos = {0.45, -0.95};  // far from the lane
    s.ball = ball::Controlled{kHome0};
    const Vec2 goal{0.0, c.half_length};
    const int flight = static_cast<int>(
        std::ceil((goal - from).Norm() / c.shot_speed - 1e-12));
    ActionSet a{Action::kShoot, std::nullopt};
    StepResult r = Step(c, s, a);
    REQUIRE(r.events.size() >= 2);
    CHECK(r.events[0].kind == EventKind::kShotTaken);
    CHECK(r.events[1].kind == EventKind::kPossessionLost);
    CHECK(r.events[1].tag == ChangeTag::kLoose);
    int goal_tick = r.events.back().kind == EventKind::kGoal ? 1 : 0;
    for (int t = 2; t <= flight + 1 && goal_tick == 0; ++t) {
      r = Step(c, r.state, Idle(c));
      for (const GameEvent& e : r.events) {
        if (e.kind == EventKind::kGoal) {
          CHECK(e.player == kHome0);
          goal_tick = t;
        }
      }
    }
    CHECK(goal_tick == flight);
    CHECK(r.state.score == std::array<int, 2>{1, 0});
    // Kick-off belongs to the conceding side.
    CHECK(r.state.phase.kind == PhaseKind::kFaceoff);
    const auto* loose = std::get_if<ball::Loose>(&r.state.ball);
    REQUIRE(loose != nullptr);
    CHECK(loose->pos == r.state.player(kAway0).pos);
  }
}

TEST_CASE("defender on the lane blocks the shot") {
  GameConfig c;
  GameState s = PlayState(c);
  s.player(kHome0).pos = {0.0, 0.5};
  s.player(kAway0).pos = {0.02, 0.75};
  s.ball = ball::Controlled{kHome0};
  StepResult r = Step(c, s, ActionSet{Action::kShoot, std::nullopt});
  bool blocked = false;
  for (int t = 0; t < 10 && !blocked; ++t) {
    for (const GameEvent& e : r.events) {
      if (e.kind == EventKind::kShotBlocked) {
        CHECK(e.player == kAway0);
        CHECK(e.other == kHome0);
        blocked = true;
      }
    }
    if (!blocked) r = Step(c, r.state, Idle(c));
  }
  CHECK(blocked);
  CHECK(PossessionIndicator(r.state) == kAway0);
  CHECK(r.state.score == std::array<int, 2>{0, 0});
}

TEST_CASE("shot from the goal line outside the mouth misses") {
  GameConfig c;
  GameState s = PlayState(c);
  s.player(kHome0).pos = {0.4, c.half_length};
  s.ball = ball::Controlled{kHome0};
  const StepResult r = Step(c, s, ActionSet{Action::kShoot, std::nullopt});
  bool missed = false;
  for (const GameEvent& e : r.events) missed |= e.kind == EventKind::kShotMissed;
  CHECK(missed);
  // The dead ball drops at the line, where the shooter may reclaim it.
  CHECK_FALSE(std::holds_alternative<ball::InFlight>(r.state.ball));
}

TEST_CASE("pass reaches the nearest teammate; k = 1 pass is a silent no-op") {
  GameConfig c;
  SUBCASE("k = 1") {
    GameState s = PlayState(c);
    s.ball = ball::Controlled{kHome0};
    const StepResult r = Step(c, s, ActionSet{Action::kPass, std::nullopt});
    CHECK(r.events.empty());
    CHECK(PossessionIndicator(r.state) == kHome0);
  }
  SUBCASE("k = 2") {
    c.k = 2;
    GameState s = PlayState(c);
    const PlayerId h1{TeamId::kHome, 1};
    s.player(kHome0).pos = {-0.3, -0.5};
    s.player(h1).pos = {0.3, -0.5};
    s.player({TeamId::kAway, 0}).pos = {0.0, 0.9};
    s.player({TeamId::kAway, 1}).pos = {0.4, 0.9};
    s.ball = ball::Controlled{kHome0};
    ActionSet a(4);
    a[0] = Action::kPass;
    StepResult r = Step(c, s, a);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].kind == EventKind::kPossessionLost);
    CHECK(r.events[0].tag == ChangeTag::kOwnTeamPass);
    CHECK_FALSE(PossessionIndicator(r.state).has_value());
    bool done = false;
    for (int t = 0; t < 30 && !done; ++t) {
      r = Step(c, r.state, Idle(c));
      for (const GameEvent& e : r.events) {
        if (e.kind == EventKind::kPassCompleted) {
          CHECK(e.player == kHome0);
          CHECK(e.other == h1);
          done = true;
        }
      }
    }
    CHECK(done);
    CHECK(PossessionIndicator(r.state) == h1);
  }
}

TEST_CASE("idle players coast to rest and nothing happens") {
  GameConfig c;
  GameState s = PlayState(c);
  s.player(kHome0).vel = {0.01, 0.01};
  s.player(kAway0).vel = {-0.01, 0.0};
  s.ball = ball::Loose{{0.4, 0.9}, {}};
  double prev = 1.0;
  for (int t = 0; t < 200; ++t) {
    const StepResult r = Step(c, s, Idle(c));
    CHECK(r.events.empty());
    const double speed = r.state.player(kHome0).vel.Norm();
    CHECK(speed <= prev);
    prev = speed;
    s = r.state;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("same state and actions give the same result") {
  GameConfig c;
  c.k = 2;
  CounterRng rng(5);
  for (int i = 0; i < 200; ++i) {
    const GameState s = testing::RandomState(c, rng);
    const ActionSet a = RandomActions(4, rng);
    const StepResult r1 = Step(c, s, a);
    const StepResult r2 = Step(c, s, a);
    CHECK(r1.state == r2.state);
    CHECK(r1.events == r2.events);
  }
}

TEST_CASE("lifecycle and argument errors") {
  GameConfig c;
  c.episode_length = 3;
  c.faceoff_countdown = 0;
  GameState s = NewMatch(c);
  for (int t = 0; t < 3; ++t) s = Step(c, s, Idle(c)).state;
  CHECK(s.phase.kind == PhaseKind::kFinished);
  CHECK_THROWS_AS(Step(c, s, Idle(c)), LifecycleError);
  const GameState fresh = NewMatch(c);
  CHECK_THROWS_AS(Step(c, fresh, ActionSet(3)), ArgumentError);
  std::map<PlayerId, Action> bad{{PlayerId{TeamId::kHome, 4}, Action::kLeft}};
  CHECK_THROWS_AS(Step(c, fresh, bad), ArgumentError);
  std::map<PlayerId, Action> ok{{kAway0, Action::kLeft}};
  CHECK_NOTHROW(Step(c, fresh, ok));
}

TEST_CASE("timeout emits EpisodeEnded at episode_length") {
  GameConfig c;
  c.episode_length = 50;
  GameState s = NewMatch(c);
  int ended = 0;
  for (int t = 1; t <= 50; ++t) {
    const StepResult r = Step(c, s, Idle(c));
    CHECK(r.state.tick == t);
    for (const GameEvent& e : r.events) {
      if (e.kind == EventKind::kEpisodeEnded) {
        ++ended;
        CHECK(e.tick == 50);
      }
    }
    s = r.state;
  }
  CHECK(ended == 1);
  CHECK(s.phase.kind == PhaseKind::kFinished);
}

TEST_CASE("possession indicator") {
  GameConfig c;
  GameState s = PlayState(c);
  s.ball = ball::Controlled{kHome0};
  CHECK(PossessionIndicator(s) == kHome0);
  s.ball = ball::Loose{};
  CHECK_FALSE(PossessionIndicator(s).has_value());
  s.ball = ball::InFlight{{}, {}, ball::FlightKind::kPass, kHome0, kHome0};
  CHECK_FALSE(PossessionIndicator(s).has_value());
}

TEST_CASE("observation layout") {
  GameConfig c;
  GameState s = PlayState(c);
  CHECK(EncodeObservation(c, s, kHome0).size() == 13);
  c.k = 3;
  s = PlayState(c);
  CHECK(ObservationSize(3) == 33);
  CHECK(EncodeObservation(c, s, {TeamId::kAway, 2}).size() == 33);

  c.k = 2;
  s = PlayState(c);
  s.ball = ball::Loose{};
  std::vector<float> o = EncodeObservation(c, s, kHome0);
  for (int i = 0; i < 4; ++i) CHECK(o[static_cast<std::size_t>(5 * i + 4)] == 0.0f);
  CHECK(o[20] == 1.0f);   // attack sign
  CHECK(o[21] == 1.0f);   // loose
  CHECK(o[22] == 1.0f);   // ticks remaining
  s.ball = ball::InFlight{{}, {}, ball::FlightKind::kShot, kHome0, kHome0};
  o = EncodeObservation(c, s, kHome0);
  CHECK(o[21] == 0.0f);

  // Viewer first, then teammates, then opponents, all by index.
  s.player({TeamId::kHome, 1}).pos = {0.25, 0.5};
  s.player({TeamId::kAway, 0}).pos = {-0.5, 1.0};
  s.ball = ball::Controlled{{TeamId::kAway, 0}};
  o = EncodeObservation(c, s, {TeamId::kHome, 1});
  CHECK(o[0] == doctest::Approx(0.5));
  CHECK(o[1] == doctest::Approx(0.5));
  CHECK(o[10] == doctest::Approx(-1.0));
  CHECK(o[14] == 1.0f);
  CHECK_THROWS_AS(EncodeObservation(c, s, {TeamId::kHome, 2}), ArgumentError);
}

TEST_CASE("observation entries stay within [-1.1, 1.1]") {
  GameConfig c;
  c.k = 2;
  CounterRng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const GameState s = RandomState(c, rng);
    for (int slot = 0; slot < 4; ++slot) {
      for (float v : EncodeObservation(c, s, PlayerId::FromSlot(slot, 2))) {
        REQUIRE(std::abs(v) <= 1.1f);
      }
    }
  }
}

// Brute-force mirror oracle: reflect y, swap teams, and compare the mirrored
// viewer's observation with the original one.
TEST_CASE("mirrored viewer sees the same observation") {
  for (int k : {1, 2, 3}) {
    GameConfig c;
    c.k = k;
    CounterRng rng(100 + static_cast<std::uint64_t>(k));
    const int n = ObservationSize(k);
    for (int i = 0; i < 500; ++i) {
      const GameState s = RandomState(c, rng);
      const GameState m = MirrorState(s);
      for (int slot = 0; slot < 2 * k; ++slot) {
        const PlayerId viewer = PlayerId::FromSlot(slot, k);
        const auto o = EncodeObservation(c, s, viewer);
        const auto om = EncodeObservation(c, m, testing::SwapTeam(viewer));
        for (int j = 0; j < n; ++j) {
          if (j == n - 3) {
            REQUIRE(om[static_cast<std::size_t>(j)] == -o[static_cast<std::size_t>(j)]);
          } else {
            REQUIRE(om[static_cast<std::size_t>(j)] == o[static_cast<std::size_t>(j)]);
          }
        }
      }
    }
  }
}

TEST_CASE("bounds hold over 10^5 random-action ticks") {
  GameConfig c;
  c.k = 2;
  c.seed = 3;
  c.randomize_start = true;
  CounterRng rng(99);
  GameState s = NewMatch(c);
  std::vector<GameEvent> events;
  for (int t = 0; t < 100000; ++t) {
    if (s.phase.kind == PhaseKind::kFinished) s = ResetEpisode(s, c);
    StepInPlace(c, s, RandomActions(4, rng), events);
    for (const PlayerState& p : s.players) {
      REQUIRE(p.pos.IsFinite());
      REQUIRE(p.vel.IsFinite());
      REQUIRE(std::abs(p.pos.x) <= c.half_width);
      REQUIRE(std::abs(p.pos.y) <= c.half_length);
      REQUIRE(p.vel.Norm() <= c.max_speed + 1e-9);
    }
    REQUIRE(s.BallPosition().IsFinite());
  }
}

// Replays random and scripted-like streams and audits the event log against
// the state sequence.
TEST_CASE("possession brackets, score conservation and goal causality") {
  GameConfig c;
  c.k = 2;
  c.seed = 21;
  c.episode_length = 3000;
  c.steal_probability_per_tick = 0.2;
  CounterRng rng(4);
  for (int episode = 0; episode < 6; ++episode) {
    c.seed = 21 + static_cast<std::uint64_t>(episode);
    c.randomize_start = episode % 2 == 1;
    GameState s = NewMatch(c);
    std::vector<GameEvent> events;
    std::array<int, 2> goals{0, 0};
    std::optional<PlayerId> shooter;  // shot in flight, same possession chain
    while (s.phase.kind != PhaseKind::kFinished) {
      // Bias toward shooting and passing so that every branch is exercised.
      ActionSet a = RandomActions(4, rng);
      const std::optional<PlayerId> before = PossessionIndicator(s);
      StepInPlace(c, s, a, events);
      const std::optional<PlayerId> after = PossessionIndicator(s);
      int lost = 0;
      int gained = 0;
      for (const GameEvent& e : events) {
        REQUIRE(e.tick == s.tick);
        switch (e.kind) {
          case EventKind::kPossessionLost:
            ++lost;
            REQUIRE(before == e.player);
            break;
          case EventKind::kPossessionGained:
            ++gained;
            REQUIRE(after == e.player);
            shooter.reset();
            break;
          case EventKind::kShotTaken:
            shooter = e.player;
            break;
          case EventKind::kGoal:
            REQUIRE(shooter == e.player);
            ++goals[static_cast<std::size_t>(e.player.team)];
            shooter.reset();
            break;
          default:
            break;
        }
      }
      const bool changed = before != after;
      REQUIRE(lost == (changed && before ? 1 : 0));
      REQUIRE(gained == (changed && after ? 1 : 0));
    }
    CHECK(goals == s.score);
  }
}

// With steals disabled the only stochastic branch is gone, and the
// y-reflected, team-swapped match must replay the reflected trajectory.
TEST_CASE("mirror symmetry of whole trajectories") {
  GameConfig c;
  c.k = 2;
  c.steal_probability_per_tick = 0.0;
  CounterRng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    GameState s = RandomState(c, rng);
    GameState m = MirrorState(s);
    std::vector<GameEvent> es;
    std::vector<GameEvent> em;
    for (int t = 0; t < 500 && s.phase.kind != PhaseKind::kFinished; ++t) {
      const ActionSet a = RandomActions(4, rng);
      StepInPlace(c, s, a, es);
      StepInPlace(c, m, SwapActions(a), em);
      const GameState back = MirrorState(m);
      REQUIRE(back.players == s.players);
      REQUIRE(back.ball == s.ball);
      REQUIRE(back.score == s.score);
      REQUIRE(back.phase == s.phase);
      REQUIRE(em.size() == es.size());
      for (std::size_t i = 0; i < es.size(); ++i) {
        REQUIRE(em[i] == MirrorEvent(es[i]));
      }
    }
  }
}

TEST_CASE("Vec2 and id helpers") {
  CHECK(PointSegmentDistance({0.0, 1.0}, {-1.0, 0.0}, {1.0, 0.0}) ==
        doctest::Approx(1.0));
  double t = -1.0;
  CHECK(PointSegmentDistance({3.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, &t) ==
        doctest::Approx(2.0));
  CHECK(t == 1.0);
  CHECK(ToString({TeamId::kAway, 1}) == "away#1");
  CHECK(ParsePlayerId("home#0") == kHome0);
  CHECK_FALSE(ParsePlayerId("left#0").has_value());
  CHECK_FALSE(ParsePlayerId("home#x").has_value());
  for (Action a : kAllActions) CHECK(ParseAction(ActionName(a)) == a);
  CHECK_FALSE(ParseAction("Jump").has_value());
  CHECK(ClaimsBefore({TeamId::kAway, 0}, {TeamId::kHome, 1}));
  CHECK(ClaimsBefore({TeamId::kHome, 0}, {TeamId::kAway, 0}));
  CHECK(MoveDirection(Action::kForward, TeamId::kAway) == Vec2{0.0, -1.0});
  CHECK(MoveDirection(Action::kLeft, TeamId::kAway) == Vec2{-1.0, 0.0});
}

TEST_CASE("loose-ball ties go to the lower index, then Home") {
  GameConfig c;
  c.k = 2;
  GameState s = PlayState(c);
  s.player({TeamId::kHome, 1}).pos = {0.02, 0.0};
  s.player({TeamId::kAway, 0}).pos = {-0.02, 0.0};
  s.player({TeamId::kHome, 0}).pos = {0.4, -0.9};
  s.player({TeamId::kAway, 1}).pos = {-0.4, 0.9};
  s.ball = ball::Loose{{0.0, 0.0}, {}};
  StepResult r = Step(c, s, Idle(c));
  CHECK(PossessionIndicator(r.state) == PlayerId{TeamId::kAway, 0});
  s.player({TeamId::kAway, 0}).pos = {0.0, 0.02};
  s.player({TeamId::kHome, 1}).pos = {0.0, -0.02};
  s.player({TeamId::kHome, 0}).pos = {0.02, 0.0};
  s.player({TeamId::kAway, 1}).pos = {-0.02, 0.0};
  r = Step(c, s, Idle(c));
  CHECK(PossessionIndicator(r.state) == PlayerId{TeamId::kHome, 0});
}

}  // namespace
}  // namespace sts2
