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


#include "sts2/harness/evaluate.h"

#include <filesystem>

#include "doctest.h"
#include "sts2/harness/train.h"

namespace sts2::harness {
namespace {

constexpr PlayerId kH0{TeamId::kHome, 0};
constexpr PlayerId kA0{TeamId::kAway, 0};

std::filesystem::path FreshDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("sts2_eval_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

SlotAssignment AllScripted(int k) {
  return SlotAssignment(static_cast<std::size_t>(2 * k), SlotSpec::Scripted());
}

GameConfig Short(int k, int length) {
  GameConfig g;
  g.k = k;
  g.episode_length = length;
  return g;
}

TEST_CASE("stats arithmetic") {
  MatchStats s = MatchStats::Empty(1);
  s.players[0].goals = 3;
  s.players[1].goals = 1;
  CHECK(s.ScoreRate(kH0) == doctest::Approx(75.0));
  CHECK(s.ScoreRate(kA0) == doctest::Approx(25.0));
  CHECK(s.PossessionShare(kH0) == 0.0);
  s.players[0].possession_ticks = 10;
  s.players[0].own_half_possession_ticks = 9;
  s.players[1].possession_ticks = 30;
  CHECK(s.PossessionShare(kH0) == doctest::Approx(25.0));
  CHECK(s.OwnHalfPossessionShare(kH0) == doctest::Approx(90.0));
  CHECK(s.TeamScoreRate(TeamId::kHome) == doctest::Approx(75.0));
  const std::string table = FormatStatsTable(s);
  CHECK(table.find("Score rate") != std::string::npos);
  CHECK(table.find("Possession") != std::string::npos);
  CHECK(table.find("75.0%") != std::string::npos);
}

TEST_CASE("tally follows controlled ticks and goal events") {
  GameConfig g;
  GameState s = NewMatch(g);
  s.phase = {PhaseKind::kPlay, 0};
  s.player(kH0).pos = {0.0, -0.3};
  s.ball = ball::Controlled{kH0};
  MatchStats st = MatchStats::Empty(1);
  TallyTick(st, s, {});
  TallyTick(st, s, {GameEvent{EventKind::kGoal, 1, kA0, {}, {}}});
  s.ball = ball::Loose{};
  TallyTick(st, s, {});
  CHECK(st.of(kH0).possession_ticks == 2);
  CHECK(st.of(kH0).own_half_possession_ticks == 2);
  CHECK(st.of(kA0).goals == 1);
}

TEST_CASE("identical scripted teams are symmetric") {
  const GameConfig g = Short(1, 3000);
  const Lineup lineup = Lineup::Build(g, AllScripted(1));
  const MatchStats s = Evaluate(g, lineup, 500, 17);
  CHECK(s.episodes == 500);
  CHECK(s.total_goals() > 0);
  CHECK(std::abs(s.TeamScoreRate(TeamId::kHome) - 50.0) <= 5.0);
  CHECK(std::abs(s.TeamPossessionShare(TeamId::kHome) - 50.0) <= 5.0);
  CHECK(s.ScoreRate(kH0) + s.ScoreRate(kA0) == doctest::Approx(100.0));
  CHECK(s.PossessionShare(kH0) + s.PossessionShare(kA0) == doctest::Approx(100.0));
}

TEST_CASE("parallel evaluation equals the serial reference") {
  const GameConfig g = Short(2, 800);
  const Lineup lineup = Lineup::Build(g, AllScripted(2));
  const MatchStats par = Evaluate(g, lineup, 24, 5);
  const MatchStats ser = EvaluateSerial(g, lineup, 24, 5);
  CHECK(par == ser);
  CHECK(Evaluate(g, lineup, 24, 5) == par);
  CHECK_FALSE(Evaluate(g, lineup, 24, 6) == par);
  CHECK_THROWS_AS(Evaluate(g, lineup, 0, 5), ArgumentError);
}

TEST_CASE("online stats equal a recount of the replay logs") {
  const GameConfig g = Short(2, 1000);
  const Lineup lineup = Lineup::Build(g, AllScripted(2));
  const auto dir = FreshDir("recount");
  const MatchStats online = Evaluate(g, lineup, 12, 3, dir.string());
  std::vector<std::string> paths;
  for (int e = 0; e < 12; ++e) {
    paths.push_back((dir / ("episode_" + std::to_string(e) + ".ndjson")).string());
  }
  const MatchStats recount = RecountFromReplayFiles(paths);
  CHECK(recount == online);
  std::filesystem::remove_all(dir);
}

TEST_CASE("lineup errors") {
  const GameConfig g = Short(1, 100);
  SlotAssignment slots = AllScripted(1);
  slots[0] = SlotSpec::Frozen("/nonexistent.ckpt");
  CHECK_THROWS_AS(Lineup::Build(g, slots), CheckpointError);
  slots[0] = SlotSpec::Learner();
  CHECK_THROWS_AS(Lineup::Build(g, slots), ConfigError);
  slots.pop_back();
  CHECK_THROWS_AS(Lineup::Build(g, slots), ConfigError);

  // A 2v2 checkpoint does not fit a 1v1 game.
  const auto dir = FreshDir("mismatch");
  const std::string path = (dir / "big.ckpt").string();
  SaveCheckpoint(path, CheckpointFromDqn(rl::MakeDqnAgent(23, 6, {}, 1), 1, 0));
  CHECK_THROWS_AS(LoadFrozenPolicy(path, g), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("crossplay") {
  const GameConfig g = Short(1, 3000);
  const auto dir = FreshDir("cross");
  const std::string random_net = (dir / "random.ckpt").string();
  SaveCheckpoint(random_net, CheckpointFromDqn(rl::MakeDqnAgent(13, 6, {}, 5), 1, 0));

  SUBCASE("a team against itself is even") {
    const std::vector<SlotSpec> team{SlotSpec::Scripted()};
    const MatchStats s = Crossplay(g, team, team, 500, 8);
    CHECK(std::abs(s.TeamScoreRate(TeamId::kHome) - 50.0) <= 5.0);
  }
  SUBCASE("a competent team beats a random network") {
    const MatchStats s = Crossplay(g, {SlotSpec::Scripted()},
                                   {SlotSpec::Frozen(random_net)}, 20, 8);
    CHECK(s.total_goals() > 0);
    CHECK(s.TeamScoreRate(TeamId::kHome) > 50.0);
  }
  SUBCASE("end swapping reports team A as Home") {
    const MatchStats s = Crossplay(g, {SlotSpec::Frozen(random_net)},
                                   {SlotSpec::Scripted()}, 20, 8);
    CHECK(s.TeamScoreRate(TeamId::kAway) > 50.0);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace sts2::harness
