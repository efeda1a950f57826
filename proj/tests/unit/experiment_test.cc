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


#include "sts2/harness/experiment.h"

#include "doctest.h"

namespace sts2::harness {
namespace {

Json Minimal() {
  return Json::parse(R"({
    "name": "unit",
    "game": {"k": 1},
    "slots": [{"player": "home#0", "kind": "learner"},
              {"player": "away#0", "kind": "scripted"}],
    "reward": {"preset": "IndividualPossession"},
    "algo": "dqn",
    "budget": 5000
  })");
}

TEST_CASE("minimal experiment parses with defaults") {
  const ExperimentConfig c = ExperimentFromJson(Minimal());
  CHECK(c.name == "unit");
  CHECK(c.game.k == 1);
  CHECK(c.slots[0].kind == SlotKind::kLearner);
  CHECK(c.slots[0].agent == "learner");
  CHECK(c.slots[1].kind == SlotKind::kScripted);
  CHECK(c.reward == MakeRewardSpec(RewardPreset::kIndividualPossession));
  CHECK(c.algo == Algo::kDqn);
  CHECK(c.budget == 5000);
  CHECK(c.dqn == rl::DqnConfig{});
  CHECK(LearnerSlots(c.slots, 1) == std::vector<PlayerId>{{TeamId::kHome, 0}});
}

TEST_CASE("every field survives a json round trip") {
  Json j = Minimal();
  j["game"] = {{"k", 2}, {"seed", 9}, {"randomize_start", true}};
  j["slots"] = Json::parse(R"([
    {"player": "home#0", "kind": "learner", "agent": "a"},
    {"player": "home#1", "kind": "learner", "agent": "a"},
    {"player": "away#0", "kind": "scripted",
     "profile": {"difficulty": "easy", "shoot_range": 0.3}},
    {"player": "away#1", "kind": "frozen", "checkpoint": "x.ckpt"}])");
  j["centralized"] = true;
  j["algo"] = "ppo";
  j["ppo"] = {{"hidden", {32}}, {"clip_ratio", 0.1}};
  j["reward"] = {{"preset", "TeamPossession"}, {"possession_gain", 0.5}};
  j["curriculum"] = Json::parse(R"([
    {"name": "open", "game": {"randomize_start": true},
     "opponent_difficulty": "easy", "advance_when": {"steps": 1000}},
    {"name": "full", "advance_when": {"eval_score_rate_at_least": 55}},
    {"name": "last"}])");
  const ExperimentConfig c = ExperimentFromJson(j);
  CHECK(c.slots[2].profile.difficulty == Difficulty::kEasy);
  CHECK(c.slots[2].profile.shoot_range == 0.3);
  CHECK(c.slots[3].checkpoint == "x.ckpt");
  CHECK(c.reward.possession_scope == PossessionScope::kTeam);
  CHECK(c.reward.possession_gain == 0.5);
  CHECK(c.ppo.hidden == std::vector<int>{32});
  REQUIRE(c.curriculum.size() == 3);
  CHECK(c.curriculum[0].advance_when->steps == 1000);
  CHECK(c.curriculum[1].advance_when->kind ==
        AdvanceRule::Kind::kEvalScoreRateAtLeast);
  const ExperimentConfig back = ExperimentFromJson(ExperimentToJson(c));
  CHECK(back == c);
  CHECK(ExperimentHash(back) == ExperimentHash(c));
  CHECK(StageGame(c, 0).randomize_start);
  CHECK(StageSlots(c, 0)[2].profile.difficulty == Difficulty::kEasy);
}

TEST_CASE("unknown keys and malformed values are rejected") {
  auto rejects = [](const Json& j) {
    CHECK_THROWS_AS(ExperimentFromJson(j), ConfigError);
  };
  Json j = Minimal();
  j["learning_rate"] = 0.1;
  rejects(j);
  j = Minimal();
  j["dqn"] = {{"lr", 0.1}};
  rejects(j);
  j = Minimal();
  j["game"]["speed"] = 1;
  rejects(j);
  j = Minimal();
  j["reward"] = {{"preset", "Dense"}};
  rejects(j);
  j = Minimal();
  j["budget"] = "many";
  rejects(j);
  j = Minimal();
  j["budget"] = 0;
  rejects(j);
  j = Minimal();
  j["algo"] = "a2c";
  rejects(j);
  j = Minimal();
  j["slots"][1]["kind"] = "robot";
  rejects(j);
  j = Minimal();
  j["slots"].erase(1);
  rejects(j);
  j = Minimal();
  j["slots"][1]["player"] = "home#0";
  rejects(j);
  j = Minimal();
  j["slots"][1]["kind"] = "human";
  rejects(j);
  j = Minimal();
  j["curriculum"] = Json::parse(R"([{"advance_when": {"steps": 1,
                                    "eval_score_rate_at_least": 2}}])");
  rejects(j);
  j = Minimal();
  j["centralized"] = true;  // needs two learners
  rejects(j);
}

TEST_CASE("learner slot rules") {
  Json j = Minimal();
  j["slots"][1]["kind"] = "learner";
  CHECK_THROWS_AS(ExperimentFromJson(j), ConfigError);  // two teams
  j = Minimal();
  j["slots"][1]["kind"] = "scripted";
  j["slots"][0]["kind"] = "scripted";
  CHECK_THROWS_AS(ExperimentFromJson(j), ConfigError);  // no learner
}

}  // namespace
}  // namespace sts2::harness
