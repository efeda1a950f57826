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


#include "sts2/rewards.h"

#include <vector>

#include "doctest.h"
#include "test_util.h"

namespace sts2 {
namespace {

constexpr PlayerId kH0{TeamId::kHome, 0};
constexpr PlayerId kH1{TeamId::kHome, 1};
constexpr PlayerId kA0{TeamId::kAway, 0};
constexpr PlayerId kA1{TeamId::kAway, 1};

GameEvent Ev(EventKind kind, PlayerId p, ChangeTag tag = ChangeTag::kLoose,
             PlayerId other = {}) {
  return GameEvent{kind, 5, p, other, tag};
}

double One(std::vector<GameEvent> events, PlayerId learner, RewardPreset p) {
  const PlayerId ls[] = {learner};
  return ComputeRewards(events, ls, MakeRewardSpec(p)).at(learner);
}

TEST_CASE("reference reward values") {
  CHECK(One({Ev(EventKind::kGoal, kH0)}, kH0, RewardPreset::kSparse) == 1.0);
  CHECK(One({Ev(EventKind::kGoal, kA0)}, kH0, RewardPreset::kSparse) == -1.0);
  CHECK(One({Ev(EventKind::kPossessionGained, kH0, ChangeTag::kOpponentTeam)},
            kH0, RewardPreset::kIndividualPossession) ==
        doctest::Approx(0.8));
  CHECK(One({Ev(EventKind::kPossessionLost, kH0, ChangeTag::kOpponentTeam)},
            kH0, RewardPreset::kIndividualPossession) ==
        doctest::Approx(-0.8));
  CHECK(One({Ev(EventKind::kPossessionLost, kH1, ChangeTag::kOpponentTeam)},
            kH0, RewardPreset::kTeammateAssist) == doctest::Approx(-0.8));
  CHECK(One({Ev(EventKind::kPossessionGained, kH1, ChangeTag::kOpponentTeam)},
            kH0, RewardPreset::kTeammateAssist) == 0.0);
  CHECK(One({}, kH0, RewardPreset::kTeammateAssist) == 0.0);
}

TEST_CASE("preset tuples") {
  const RewardSpec sparse = MakeRewardSpec(RewardPreset::kSparse);
  CHECK(sparse.possession_gain == 0.0);
  CHECK(sparse.possession_loss == 0.0);
  CHECK(sparse.teammate_loss_penalty == 0.0);
  const RewardSpec team = MakeRewardSpec(RewardPreset::kTeamPossession);
  CHECK(team.possession_scope == PossessionScope::kTeam);
  CHECK(team == MakeRewardSpec(RewardPreset::kCentralizedTeam));
  const RewardSpec assist = MakeRewardSpec(RewardPreset::kTeammateAssist);
  CHECK(assist.possession_scope == PossessionScope::kIndividual);
  CHECK(assist.teammate_loss_penalty == -0.8);
  for (auto p : {RewardPreset::kSparse, RewardPreset::kIndividualPossession,
                 RewardPreset::kTeamPossession, RewardPreset::kTeammateAssist,
                 RewardPreset::kCentralizedTeam}) {
    CHECK(ParseRewardPreset(RewardPresetName(p)) == p);
  }
  CHECK_FALSE(ParseRewardPreset("Dense").has_value());
}

TEST_CASE("team scope credits the whole team") {
  const PlayerId ls[] = {kH0, kH1, kA0};
  const std::vector<GameEvent> ev{
      Ev(EventKind::kPossessionGained, kH1, ChangeTag::kOpponentTeam)};
  const auto r =
      ComputeRewards(ev, ls, MakeRewardSpec(RewardPreset::kTeamPossession));
  CHECK(r.at(kH0) == doctest::Approx(0.8));
  CHECK(r.at(kH1) == doctest::Approx(0.8));
  CHECK(r.at(kA0) == 0.0);
}

TEST_CASE("own-team passes are excluded unless enabled") {
  const std::vector<GameEvent> ev{
      Ev(EventKind::kPossessionLost, kH0, ChangeTag::kOwnTeamPass)};
  RewardSpec spec = MakeRewardSpec(RewardPreset::kIndividualPossession);
  CHECK(RewardFor(ev, kH0, spec) == 0.0);
  spec.exclude_within_team_passes = false;
  CHECK(RewardFor(ev, kH0, spec) == doctest::Approx(-0.8));
}

TEST_CASE("loose pickups are configurable") {
  const std::vector<GameEvent> ev{
      Ev(EventKind::kPossessionGained, kH0, ChangeTag::kLoose)};
  RewardSpec spec = MakeRewardSpec(RewardPreset::kIndividualPossession);
  CHECK(RewardFor(ev, kH0, spec) == doctest::Approx(0.8));
  spec.reward_loose_pickups = false;
  CHECK(RewardFor(ev, kH0, spec) == 0.0);
}

TEST_CASE("argument errors") {
  const PlayerId none[] = {kH0};
  std::vector<GameEvent> ev{Ev(EventKind::kGoal, kH0),
                            Ev(EventKind::kGoal, kA0)};
  ev[1].tick = 6;
  CHECK_THROWS_AS(ComputeRewards(ev, none, {}), ArgumentError);
  CHECK_THROWS_AS(ComputeRewards({}, std::span<const PlayerId>(), {}),
                  ArgumentError);
  RewardSpec bad;
  bad.possession_gain = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  RewardSpec team;
  team.possession_scope = PossessionScope::kTeam;
  CHECK_THROWS_AS(RewardSpec{} + team, ArgumentError);
}

// Random single-tick event lists drawn from real simulation ticks.
std::vector<std::vector<GameEvent>> SampleTicks() {
  GameConfig c;
  c.k = 2;
  c.steal_probability_per_tick = 0.3;
  c.randomize_start = true;
  CounterRng rng(123);
  std::vector<std::vector<GameEvent>> out;
  GameState s = NewMatch(c);
  std::vector<GameEvent> events;
  while (out.size() < 3000) {
    if (s.phase.kind == PhaseKind::kFinished) s = ResetEpisode(s, c);
    StepInPlace(c, s, testing::RandomActions(4, rng), events);
    if (!events.empty()) out.push_back(events);
  }
  return out;
}

TEST_CASE("properties over simulated event ticks") {
  const auto ticks = SampleTicks();
  const PlayerId all[] = {kH0, kH1, kA0, kA1};
  const RewardSpec sparse = MakeRewardSpec(RewardPreset::kSparse);
  const RewardSpec team = MakeRewardSpec(RewardPreset::kTeamPossession);
  const RewardSpec indiv = MakeRewardSpec(RewardPreset::kIndividualPossession);
  const RewardSpec assist = MakeRewardSpec(RewardPreset::kTeammateAssist);
  RewardSpec extra;
  extra.score_reward = 0.5;
  extra.concede_reward = -2.0;
  extra.possession_gain = 0.1;
  extra.possession_loss = -0.3;
  extra.teammate_loss_penalty = -0.2;
  int goals = 0;
  for (const auto& ev : ticks) {
    // Zero-sum scoring with full rosters.
    const auto rs = ComputeRewards(ev, all, sparse);
    double sum = 0.0;
    for (const auto& [p, r] : rs) sum += r;
    REQUIRE(sum == doctest::Approx(0.0));
    for (const GameEvent& e : ev) goals += e.kind == EventKind::kGoal;

    // Team scope: teammates get identical rewards.
    const auto rt = ComputeRewards(ev, all, team);
    REQUIRE(rt.at(kH0) == rt.at(kH1));
    REQUIRE(rt.at(kA0) == rt.at(kA1));

    // Individual locality: drop events not about H0 (except goals).
    std::vector<GameEvent> mine;
    for (const GameEvent& e : ev) {
      if (e.kind == EventKind::kGoal || e.player == kH0) mine.push_back(e);
    }
    REQUIRE(RewardFor(ev, kH0, indiv) == RewardFor(mine, kH0, indiv));

    // Linearity.
    const auto lhs = ComputeRewards(ev, all, assist + extra);
    const auto a = ComputeRewards(ev, all, assist);
    const auto b = ComputeRewards(ev, all, extra);
    for (PlayerId p : all) {
      REQUIRE(lhs.at(p) == doctest::Approx(a.at(p) + b.at(p)));
      REQUIRE(RewardFor(ev, p, assist) == a.at(p));
    }
  }
  CHECK(goals > 0);
}

}  // namespace
}  // namespace sts2
