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


#include "sts2/replay.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_util.h"

namespace sts2 {
namespace {

// Plays one short match with random actions and returns the log text.
std::string RecordMatch(const GameConfig& c, std::uint64_t action_seed,
                        GameState* final_state = nullptr) {
  std::ostringstream out;
  ReplayWriter writer(out, c);
  CounterRng rng(action_seed);
  GameState s = NewMatch(c);
  std::vector<GameEvent> events;
  while (s.phase.kind != PhaseKind::kFinished) {
    ActionSet a = testing::RandomActions(c.num_players(), rng);
    if (s.tick % 7 == 0) a[0].reset();  // idle human input
    StepInPlace(c, s, a, events);
    writer.Record(s, events, a);
  }
  if (final_state) *final_state = s;
  return out.str();
}

GameConfig SmallConfig() {
  GameConfig c;
  c.k = 2;
  c.seed = 77;
  c.episode_length = 600;
  c.steal_probability_per_tick = 0.2;
  c.randomize_start = true;
  return c;
}

TEST_CASE("replay round trip and bit-exact regeneration") {
  const GameConfig c = SmallConfig();
  GameState last;
  const std::string text = RecordMatch(c, 5, &last);
  std::istringstream in(text);
  const Replay r = ParseReplay(in);
  CHECK(r.config == c);
  CHECK(r.config_hash == ConfigHash(c));
  REQUIRE(r.frames.size() == 600);
  CHECK(r.frames.back().state == last);
  CHECK(r.frames.front().state.tick == 1);
  CHECK_FALSE(r.frames[0].actions[0].has_value());
  CHECK(RegenerateReplay(r) == text);
  // Score in the log agrees with the goal events it carries.
  std::array<int, 2> goals{0, 0};
  for (const ReplayFrame& f : r.frames) {
    for (const GameEvent& e : f.events) {
      if (e.kind == EventKind::kGoal) {
        ++goals[static_cast<std::size_t>(e.player.team)];
      }
    }
  }
  CHECK(goals == last.score);
}

TEST_CASE("state json round trip") {
  GameConfig c;
  c.k = 3;
  CounterRng rng(2);
  for (int i = 0; i < 200; ++i) {
    const GameState s = testing::RandomState(c, rng);
    REQUIRE(StateFromJson(StateToJson(s), 3) == s);
  }
}

TEST_CASE("header line carries the config") {
  const GameConfig c = SmallConfig();
  const Json h = Json::parse(ReplayHeaderLine(c));
  GameConfig back;
  ConfigFromJson(h.at("config"), back);
  CHECK(back == c);
}

TEST_CASE("malformed logs raise ReplayError") {
  const GameConfig c = SmallConfig();
  const std::string text = RecordMatch(c, 1);
  SUBCASE("empty") {
    std::istringstream in("");
    CHECK_THROWS_AS(ParseReplay(in), ReplayError);
  }
  SUBCASE("not json") {
    std::istringstream in("{oops\n");
    CHECK_THROWS_AS(ParseReplay(in), ReplayError);
  }
  SUBCASE("truncated frame") {
    const std::size_t cut = text.find('\n', text.find('\n') + 1);
    std::istringstream in(text.substr(0, cut - 10) + "\n");
    CHECK_THROWS_AS(ParseReplay(in), ReplayError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(LoadReplay("/nonexistent/replay.ndjson"), ReplayError);
  }
}

TEST_CASE("config hash differs when a field changes") {
  GameConfig a = SmallConfig();
  GameConfig b = a;
  b.shot_speed = 0.081;
  CHECK(ConfigHash(a) != ConfigHash(b));
  CHECK(ConfigHash(a) == ConfigHash(SmallConfig()));
  CHECK(HexU64(0xabcULL) == "0000000000000abc");
  CHECK(Fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(Fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("config json rejects unknown keys and bad types") {
  GameConfig c;
  CHECK_THROWS_AS(ConfigFromJson(Json{{"bogus", 1}}, c), ConfigError);
  CHECK_THROWS_AS(ConfigFromJson(Json{{"k", "two"}}, c), ConfigError);
  ConfigFromJson(Json{{"k", 3}}, c);
  CHECK(c.k == 3);
}

TEST_CASE("events and actions serialize both ways") {
  const GameEvent e{EventKind::kPassIntercepted, 9, {TeamId::kAway, 1},
                    {TeamId::kHome, 0}, ChangeTag::kLoose};
  CHECK(EventFromJson(EventToJson(e)) == e);
  const GameEvent lost{EventKind::kPossessionLost, 3, {TeamId::kHome, 2},
                       {}, ChangeTag::kOwnTeamPass};
  CHECK(EventFromJson(EventToJson(lost)) == lost);
  const ActionSet a{Action::kShoot, std::nullopt, Action::kLeft, Action::kPass};
  CHECK(ActionsFromJson(ActionsToJson(a), 4) == a);
  CHECK_THROWS(ActionsFromJson(ActionsToJson(a), 2));
}

}  // namespace
}  // namespace sts2
