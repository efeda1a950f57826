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

#include "sts2/checks/acceptance.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sts2/game.h"
#include "sts2/harness/checkpoint.h"
#include "sts2/harness/evaluate.h"
#include "sts2/replay.h"
#include "sts2/rewards.h"
#include "sts2/rl/dqn.h"
#include "sts2/rl/ppo.h"
#include "sts2/scripted_ai.h"

namespace sts2::checks {
namespace {

using Clock = std::chrono::steady_clock;
using harness::SlotSpec;

std::string Fmt(const char* fmt, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

// Runs `body` and stamps id, title and wall time on its result.
template <typename Body>
CheckResult Timed(const std::string& id, const std::string& title, Body body) {
  const auto t0 = Clock::now();
  CheckResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = id;
  r.title = title;
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::string RecordEpisode(const GameConfig& game,
                          const harness::SlotAssignment& slots) {
  const harness::Lineup lineup = harness::Lineup::Build(game, slots);
  std::ostringstream log;
  ReplayWriter writer(log, game);
  GameState state = NewMatch(game);
  ActionSet actions(static_cast<std::size_t>(game.num_players()));
  std::vector<GameEvent> events;
  while (state.phase.kind != PhaseKind::kFinished) {
    std::fill(actions.begin(), actions.end(), std::nullopt);
    lineup.Act(game, state, actions);
    StepInPlace(game, state, actions, events);
    writer.Record(state, events, actions);
  }
  return log.str();
}

GameConfig RandomConfig(CounterRng& rng) {
  GameConfig g;
  g.k = 1 + static_cast<int>(rng.Below(3));
  g.max_speed = rng.Uniform(0.015, 0.03);
  g.accel_per_tick = rng.Uniform(0.002, 0.006);
  g.friction_coeff = rng.Uniform(0.02, 0.1);
  g.steal_probability_per_tick = rng.Uniform(0.0, 0.1);
  g.randomize_start = rng.Uniform() < 0.5;
  g.episode_length = 3000;
  g.seed = rng.Next();
  return g;
}

// Relative error of one gradient entry; the floor keeps entries at
// round-off level from dividing by ~0.
double RelErr(double fd, double analytic) {
  return std::abs(fd - analytic) /
         std::max({std::abs(fd), std::abs(analytic), 1e-4});
}

template <typename LossFn>
double MaxGradError(nn::Mlp& net, std::span<const double> grads, LossFn loss) {
  const double h = 1e-6;
  std::vector<double> p(net.parameters().begin(), net.parameters().end());
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<double> q = p;
    q[i] = p[i] + h;
    net.SetParameters(q);
    const double up = loss();
    q[i] = p[i] - h;
    net.SetParameters(q);
    const double down = loss();
    worst = std::max(worst, RelErr((up - down) / (2 * h), grads[i]));
  }
  net.SetParameters(p);
  return worst;
}

std::vector<float> RandomObs(int n, CounterRng& rng) {
  std::vector<float> v(static_cast<std::size_t>(n));
  for (float& x : v) x = static_cast<float>(rng.Uniform(-1.1, 1.1));
  return v;
}

// Random event streams over a 2v2 roster.
constexpr int kK = 2;

PlayerId RandomPlayer(CounterRng& rng) {
  return PlayerId::FromSlot(static_cast<int>(rng.Below(2 * kK)), kK);
}

GameEvent RandomEvent(CounterRng& rng) {
  GameEvent e;
  e.kind = static_cast<EventKind>(rng.Below(9));
  e.player = RandomPlayer(rng);
  e.other = RandomPlayer(rng);
  e.tag = static_cast<ChangeTag>(rng.Below(3));
  return e;
}

// Dyadic weights keep every sum exact, so linearity can be checked with ==.
RewardSpec RandomDyadicSpec(CounterRng& rng) {
  const auto w = [&] { return (static_cast<double>(rng.Below(33)) - 16.0) / 8.0; };
  RewardSpec s;
  s.score_reward = w();
  s.concede_reward = w();
  s.possession_gain = w();
  s.possession_loss = w();
  s.teammate_loss_penalty = w();
  s.possession_scope = PossessionScope::kIndividual;
  s.exclude_within_team_passes = true;
  s.reward_loose_pickups = true;
  return s;
}

double OwnTeamGoalSum(std::span<const GameEvent> events,
                      std::span<const PlayerId> players, const RewardSpec& spec) {
  double sum = 0.0;
  for (PlayerId p : players) sum += RewardFor(events, p, spec);
  return sum;
}

bool RowsSumTo100(const harness::MatchStats& s) {
  double score = 0.0;
  double poss = 0.0;
  for (int slot = 0; slot < 2 * s.k; ++slot) {
    const PlayerId p = PlayerId::FromSlot(slot, s.k);
    score += s.ScoreRate(p);
    poss += s.PossessionShare(p);
  }
  const bool score_ok = s.total_goals() == 0 || std::abs(score - 100.0) < 1e-9;
  const bool poss_ok = s.total_possession() == 0 || std::abs(poss - 100.0) < 1e-9;
  return score_ok && poss_ok;
}

constexpr PlayerId kLearner{TeamId::kHome, 0};

}  // namespace

std::string FormatResult(const CheckResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS " : "FAIL ") << r.id << " " << r.title << ": "
     << r.detail << " (" << Fmt("%.1f", r.seconds) << " s)";
  return os.str();
}

CheckResult CheckDeterminism(std::uint64_t seed) {
  return Timed("P1", "Determinism", [&] {
    CounterRng rng(DeriveSeed(seed, 101));
    int identical = 0;
    int seed_sensitive = 0;
    std::size_t bytes = 0;
    for (int i = 0; i < 20; ++i) {
      const GameConfig g = RandomConfig(rng);
      const harness::SlotAssignment slots(static_cast<std::size_t>(2 * g.k),
                                          SlotSpec::Scripted());
      const std::string a = RecordEpisode(g, slots);
      const std::string b = RecordEpisode(g, slots);
      identical += a == b;
      bytes += a.size();
      GameConfig other = g;
      other.seed = g.seed + 1;
      seed_sensitive += RecordEpisode(other, slots) != a;
    }
    CheckResult r;
    r.passed = identical == 20;
    r.detail = std::to_string(identical) + "/20 pairs byte-identical over " +
               std::to_string(bytes / 1024) + " KiB of logs (" +
               std::to_string(seed_sensitive) + "/20 differ under a new seed)";
    return r;
  });
}

CheckResult CheckGradients(std::uint64_t seed) {
  return Timed("P2", "Gradient correctness", [&] {
    CounterRng rng(DeriveSeed(seed, 102));
    double worst_dqn = 0.0;
    double worst_ppo = 0.0;
    int instances = 0;
    for (int trial = 0; trial < 12; ++trial) {
      rl::DqnConfig cfg;
      cfg.hidden = {8};
      cfg.huber = trial % 2 == 1;
      cfg.gamma = rng.Uniform(0.5, 0.999);
      const int obs = 3 + static_cast<int>(rng.Below(4));
      rl::DqnAgent agent = rl::MakeDqnAgent(obs, 6, cfg, rng.Next());
      agent.target = nn::Mlp::Init({obs, 8, 6}, rng.Next());
      std::vector<rl::Transition> batch;
      for (int i = 0; i < 12; ++i) {
        batch.push_back({RandomObs(obs, rng), static_cast<int>(rng.Below(6)),
                         rng.Uniform(-1.0, 1.0), RandomObs(obs, rng),
                         rng.Uniform() < 0.3});
      }
      const rl::DqnLoss base = rl::DqnLossAndGradient(agent, batch);
      worst_dqn = std::max(worst_dqn, MaxGradError(agent.online, base.grads.values, [&] {
        return rl::DqnLossAndGradient(agent, batch).loss;
      }));
      ++instances;
    }
    for (int trial = 0; trial < 12; ++trial) {
      rl::PpoConfig cfg;
      cfg.hidden = {8};
      cfg.entropy_coef = trial % 2 ? 0.05 : 0.0;
      cfg.clip_ratio = rng.Uniform(0.1, 0.3);
      const int obs = 3 + static_cast<int>(rng.Below(4));
      rl::PpoAgent agent = rl::MakePpoAgent(obs, 6, cfg, rng.Next());
      agent.policy = nn::Mlp::Init({obs, 8, 6}, rng.Next());
      rl::Rollout r;
      r.obs_size = obs;
      for (int i = 0; i < 12; ++i) {
        const auto o = RandomObs(obs, rng);
        const rl::PolicySample s = rl::PpoPolicy(agent, o, rng);
        r.obs.insert(r.obs.end(), o.begin(), o.end());
        r.actions.push_back(s.action);
        // Shifted old log-probs put some ratios outside the clip band.
        r.log_probs.push_back(s.log_prob + rng.Uniform(-0.5, 0.5));
        r.advantages.push_back(rng.Uniform(-1.0, 1.0));
        r.returns.push_back(rng.Uniform(-1.0, 1.0));
      }
      std::vector<int> idx(12);
      std::iota(idx.begin(), idx.end(), 0);
      const rl::PpoLoss base = rl::PpoLossAndGradients(agent, r, idx);
      const auto loss = [&] { return rl::PpoLossAndGradients(agent, r, idx).loss; };
      worst_ppo = std::max(worst_ppo, MaxGradError(agent.policy, base.policy_grads.values, loss));
      worst_ppo = std::max(worst_ppo, MaxGradError(agent.value, base.value_grads.values, loss));
      ++instances;
    }
    CheckResult res;
    res.passed = instances >= 20 && worst_dqn <= 1e-4 && worst_ppo <= 1e-4;
    res.detail = std::to_string(instances) + " instances, max relative error DQN " +
                 Fmt("%.2e", worst_dqn) + ", PPO " + Fmt("%.2e", worst_ppo) +
                 " (threshold 1e-4, h = 1e-6)";
    return res;
  });
}

CheckResult CheckRewardAccounting(std::uint64_t seed) {
  return Timed("P3", "Reward accounting", [&] {
    CounterRng rng(DeriveSeed(seed, 103));
    std::vector<PlayerId> all;
    for (int s = 0; s < 2 * kK; ++s) all.push_back(PlayerId::FromSlot(s, kK));
    const RewardSpec sparse = MakeRewardSpec(RewardPreset::kSparse);
    const RewardSpec indiv = MakeRewardSpec(RewardPreset::kIndividualPossession);
    const RewardSpec team = MakeRewardSpec(RewardPreset::kTeamPossession);
    const RewardSpec assist = MakeRewardSpec(RewardPreset::kTeammateAssist);
    int violations[5] = {0, 0, 0, 0, 0};
    const int kStreams = 10000;
    for (int n = 0; n < kStreams; ++n) {
      std::vector<GameEvent> ev(1 + rng.Below(8));
      const int tick = static_cast<int>(rng.Below(3000));
      for (GameEvent& e : ev) {
        e = RandomEvent(rng);
        e.tick = tick;  // one tick's events
      }

      // Zero-sum scoring across both full rosters.
      if (OwnTeamGoalSum(ev, all, sparse) != 0.0) ++violations[0];

      // Team scope: teammates always receive the same reward.
      for (int i = 1; i < kK; ++i) {
        for (TeamId t : {TeamId::kHome, TeamId::kAway}) {
          if (RewardFor(ev, {t, 0}, team) != RewardFor(ev, {t, i}, team)) {
            ++violations[1];
          }
        }
      }

      // Individual locality: only goals and the learner's own events matter.
      const PlayerId me = RandomPlayer(rng);
      std::vector<GameEvent> mine;
      for (const GameEvent& e : ev) {
        if (e.kind == EventKind::kGoal || e.player == me) mine.push_back(e);
      }
      if (RewardFor(ev, me, indiv) != RewardFor(mine, me, indiv)) ++violations[2];

      // Linearity in the spec weights.
      const RewardSpec a = RandomDyadicSpec(rng);
      const RewardSpec b = RandomDyadicSpec(rng);
      const auto lhs = ComputeRewards(ev, all, a + b);
      for (PlayerId p : all) {
        if (lhs.at(p) != RewardFor(ev, p, a) + RewardFor(ev, p, b)) ++violations[3];
      }

      // Teammate asymmetry: a teammate's gain earns nothing, a teammate's
      // turnover to the opponent costs the penalty.
      const PlayerId mate{me.team, (me.index + 1) % kK};
      const double base = RewardFor(ev, me, assist);
      std::vector<GameEvent> with_gain = ev;
      with_gain.push_back({EventKind::kPossessionGained, tick, mate,
                           {Opponent(me.team), 0}, ChangeTag::kOpponentTeam});
      std::vector<GameEvent> with_loss = ev;
      with_loss.push_back({EventKind::kPossessionLost, tick, mate,
                           {Opponent(me.team), 0}, ChangeTag::kOpponentTeam});
      if (RewardFor(with_gain, me, assist) != base ||
          RewardFor(with_loss, me, assist) != base + assist.teammate_loss_penalty ||
          RewardFor(with_gain, me, indiv) != RewardFor(ev, me, indiv)) {
        ++violations[4];
      }
    }
    CheckResult r;
    r.passed = std::accumulate(std::begin(violations), std::end(violations), 0) == 0;
    r.detail = std::to_string(kStreams) +
               " streams; violations zero-sum/team/locality/linearity/teammate = " +
               std::to_string(violations[0]) + "/" + std::to_string(violations[1]) +
               "/" + std::to_string(violations[2]) + "/" +
               std::to_string(violations[3]) + "/" + std::to_string(violations[4]);
    return r;
  });
}

CheckResult CheckScriptedQuirk(std::uint64_t seed) {
  return Timed("P4", "Scripted-AI quirk", [&] {
    CounterRng rng(DeriveSeed(seed, 104));
    int states = 0;
    int decisions = 0;
    int crossings = 0;
    while (states < 10000) {
      GameConfig g;
      g.k = 1 + static_cast<int>(rng.Below(3));
      GameState s = NewMatch(g);
      s.phase = {PhaseKind::kPlay, 0};
      for (PlayerState& p : s.players) {
        p.pos = {rng.Uniform(-g.half_width, g.half_width),
                 rng.Uniform(-g.half_length, g.half_length)};
        const double v = g.max_speed / std::sqrt(2.0);
        p.vel = {rng.Uniform(-v, v), rng.Uniform(-v, v)};
      }
      const PlayerId carrier = PlayerId::FromSlot(
          static_cast<int>(rng.Below(static_cast<std::uint64_t>(2 * g.k))), g.k);
      // The carrier in its own half.
      PlayerState& c = s.player(carrier);
      c.pos.y = -AttackSign(carrier.team) * rng.Uniform(0.0, g.half_length);
      if (c.pos.y == 0.0) continue;
      s.ball = ball::Controlled{carrier};
      ++states;
      for (int j = 0; j < g.k; ++j) {
        const PlayerId me{Opponent(carrier.team), j};
        const Action a = ScriptedAction(g, s, me, {});
        const double before = AttackSign(me.team) * s.player(me).pos.y;
        const double step =
            AttackSign(me.team) * MoveDirection(a, me.team).y * g.max_speed;
        // Crossing: from the defender's own half over the line, or deeper
        // into the carrier's half.
        if ((before <= 0.0 && before + step > 0.0) || (before > 0.0 && step > 0.0)) {
          ++crossings;
        }
        ++decisions;
      }
    }
    CheckResult r;
    r.passed = crossings == 0;
    r.detail = std::to_string(states) + " states, " + std::to_string(decisions) +
               " defender decisions, " + std::to_string(crossings) +
               " centre-line crossings";
    return r;
  });
}

CheckResult CheckStatsOracle(const std::string& work_dir, std::uint64_t seed) {
  return Timed("P5", "Stats oracle", [&] {
    const std::filesystem::path dir = std::filesystem::path(work_dir) / "stats_oracle";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    GameConfig g;
    g.k = 2;
    ScriptedProfile easy;
    easy.difficulty = Difficulty::kEasy;
    const harness::SlotAssignment slots = {SlotSpec::Scripted(), SlotSpec::Scripted(),
                                           SlotSpec::Scripted(easy),
                                           SlotSpec::Scripted(easy)};
    const harness::Lineup lineup = harness::Lineup::Build(g, slots);
    const int episodes = 100;
    const harness::MatchStats online =
        harness::Evaluate(g, lineup, episodes, DeriveSeed(seed, 105), dir.string());
    std::vector<std::string> paths;
    for (int e = 0; e < episodes; ++e) {
      paths.push_back((dir / ("episode_" + std::to_string(e) + ".ndjson")).string());
    }
    const harness::MatchStats recount = harness::RecountFromReplayFiles(paths);
    const harness::MatchStats serial =
        harness::EvaluateSerial(g, lineup, episodes, DeriveSeed(seed, 105));
    CheckResult r;
    const bool rows = RowsSumTo100(online);
    r.passed = online == recount && online == serial && rows;
    r.detail = std::string("recount ") + (online == recount ? "equal" : "DIFFERS") +
               ", serial " + (online == serial ? "equal" : "DIFFERS") +
               ", rows sum to 100%: " + (rows ? "yes" : "no") + "; " +
               std::to_string(online.total_goals()) + " goals over " +
               std::to_string(episodes) + " episodes";
    std::filesystem::remove_all(dir);
    return r;
  });
}

CheckResult CheckThroughput(double seconds) {
  return Timed("P6", "Simulator throughput", [&] {
    GameConfig g;
    g.k = 2;
    const harness::SlotAssignment slots(4, SlotSpec::Scripted());
    const harness::Lineup lineup = harness::Lineup::Build(g, slots);
    ActionSet actions(4);
    std::vector<GameEvent> events;
    std::int64_t ticks = 0;
    std::uint64_t episode = 0;
    const auto t0 = Clock::now();
    double elapsed = 0.0;
    while (elapsed < seconds) {
      g.seed = episode++;
      GameState state = NewMatch(g);
      while (state.phase.kind != PhaseKind::kFinished) {
        std::fill(actions.begin(), actions.end(), std::nullopt);
        lineup.Act(g, state, actions);
        StepInPlace(g, state, actions, events);
        ++ticks;
      }
      elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    }
    const double rate = static_cast<double>(ticks) / elapsed;
    CheckResult r;
    r.passed = rate >= 50000.0;
    r.detail = Fmt("%.0f ticks/s single-threaded, 2v2 scripted (threshold 50000; %.0f ticks in %.1f s)",
                   rate, static_cast<double>(ticks), elapsed);
    return r;
  });
}

CheckResult CheckEvalScoreRate(const harness::PresetResult& t2) {
  return Timed("P7", "1v1 DQN with possession shaping", [&] {
    const harness::TrainResult& run = t2.runs.back().result;
    const double rate = t2.stats.ScoreRate(kLearner);
    CheckResult r;
    r.passed = rate >= 60.0 && t2.stats.episodes >= 500 &&
               run.checkpoint.env_steps <= 3000000;
    r.detail = Fmt("learner score rate %.1f%% over %.0f greedy episodes after %.0f env steps "
                   "(threshold 60%%, <= 3M steps)",
                   rate, t2.stats.episodes, static_cast<double>(run.checkpoint.env_steps));
    return r;
  });
}

CheckResult CheckShapingBeatsSparse(const harness::PresetResult& t2,
                                    const harness::PresetResult& t1) {
  return Timed("P8", "Shaping beats sparse", [&] {
    const double shaped = t2.stats.ScoreRate(kLearner);
    const double sparse = t1.stats.ScoreRate(kLearner);
    CheckResult r;
    r.passed = shaped - sparse >= 15.0;
    r.detail = Fmt("possession-shaped %.1f%% vs sparse %.1f%%, margin %.1f points "
                   "(threshold 15) at %.0f env steps",
                   shaped, sparse, shaped - sparse,
                   static_cast<double>(t1.runs.back().result.checkpoint.env_steps));
    return r;
  });
}

CheckResult CheckPpoLocalMinimum(const harness::PresetResult& run) {
  return Timed("P9", "PPO own-half holding", [&] {
    const double scoreless = run.stats.ScorelessShare();
    const double own_half = run.stats.OwnHalfPossessionShare(kLearner);
    CheckResult r;
    r.passed = scoreless >= 50.0 && own_half >= 80.0;
    r.detail = Fmt("0-0 episodes %.1f%% (threshold 50%%), carrier own-half share of "
                   "possession ticks %.1f%% (threshold 80%%), learner possession %.1f%%",
                   scoreless, own_half, run.stats.PossessionShare(kLearner));
    return r;
  });
}

CheckResult CheckJointAction(const harness::PresetResult& run,
                             const std::string& run_dir) {
  return Timed("P10", "Joint-action plumbing", [&] {
    const harness::Checkpoint& trained = run.runs.back().result.checkpoint;
    const harness::Checkpoint loaded =
        harness::LoadCheckpoint((std::filesystem::path(run_dir) / "final.ckpt").string());
    const bool same = harness::EncodeCheckpoint(loaded) == harness::EncodeCheckpoint(trained);
    const bool rows = RowsSumTo100(run.stats) && run.stats.episodes > 0;
    CheckResult r;
    r.passed = trained.action_count == 36 && trained.joint_agents == 2 && same && rows;
    r.detail = "joint action count " + std::to_string(trained.action_count) +
               ", agents " + std::to_string(trained.joint_agents) +
               ", checkpoint reload " + (same ? "identical" : "DIFFERS") +
               ", stats valid: " + (rows ? "yes" : "no") +
               Fmt(" (team score rate %.1f%%, no performance bar)",
                   run.stats.TeamScoreRate(TeamId::kHome));
    return r;
  });
}

CheckResult CheckCheckpointRoundTrip(const std::string& work_dir, std::uint64_t seed) {
  return Timed("P11", "Checkpoint round trip", [&] {
    using harness::Checkpoint;
    using harness::CheckpointError;
    CounterRng rng(DeriveSeed(seed, 111));
    rl::DqnConfig cfg;
    cfg.hidden = {32, 32};
    const int obs = ObservationSize(2);
    rl::DqnAgent agent = rl::MakeDqnAgent(obs, 6, cfg, rng.Next());
    agent.env_steps = 424242;
    const Checkpoint ckpt = harness::CheckpointFromDqn(agent, 1, 0xabcdefULL);
    const std::string path =
        (std::filesystem::path(work_dir) / "roundtrip.ckpt").string();
    harness::SaveCheckpoint(path, ckpt);
    const Checkpoint back = harness::LoadCheckpoint(path);
    int same = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto o = RandomObs(obs, rng);
      same += harness::GreedyAction(ckpt, o) == harness::GreedyAction(back, o);
    }
    const bool counters = back.env_steps == ckpt.env_steps &&
                          back.config_hash == ckpt.config_hash &&
                          harness::EncodeCheckpoint(back) == harness::EncodeCheckpoint(ckpt);

    using K = CheckpointError::Kind;
    const std::string good = harness::EncodeCheckpoint(ckpt);
    const auto kind_of = [](std::string_view bytes) -> std::optional<K> {
      try {
        harness::DecodeCheckpoint(bytes);
      } catch (const CheckpointError& e) {
        return e.kind();
      }
      return std::nullopt;
    };
    std::string magic = good;
    magic[0] = 'X';
    std::string version = good;
    version[8] = 9;
    std::string size = good;
    size[12] = static_cast<char>(size[12] + 1);
    int typed = 0;
    typed += kind_of(good.substr(0, good.size() / 2)) == K::kTruncated;
    typed += kind_of(magic) == K::kBadMagic;
    typed += kind_of(version) == K::kVersion;
    typed += kind_of(size) == K::kSizeMismatch;
    typed += kind_of(good + "x") == K::kSizeMismatch;
    std::filesystem::remove(path);

    CheckResult r;
    r.passed = same == 1000 && counters && typed == 5;
    r.detail = std::to_string(same) + "/1000 greedy actions identical, counters " +
               (counters ? "preserved" : "LOST") + ", " + std::to_string(typed) +
               "/5 corruptions rejected with the expected error kind";
    return r;
  });
}

std::vector<CheckResult> RunSelfcheck(const std::string& work_dir, std::uint64_t seed,
                                      const ResultCallback& on_result,
                                      double throughput_seconds) {
  std::filesystem::create_directories(work_dir);
  std::vector<CheckResult> out;
  const auto add = [&](CheckResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  add(CheckDeterminism(seed));
  add(CheckGradients(seed));
  add(CheckRewardAccounting(seed));
  add(CheckScriptedQuirk(seed));
  add(CheckStatsOracle(work_dir, seed));
  add(CheckThroughput(throughput_seconds));
  add(CheckCheckpointRoundTrip(work_dir, seed));
  return out;
}

std::vector<CheckResult> RunAcceptance(const AcceptanceOptions& options,
                                       const ResultCallback& on_result) {
  std::vector<CheckResult> out;
  const auto add = [&](CheckResult r) {
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  };
  std::filesystem::create_directories(options.work_dir);
  add(CheckDeterminism(options.seed));
  add(CheckGradients(options.seed));
  add(CheckRewardAccounting(options.seed));
  add(CheckScriptedQuirk(options.seed));
  add(CheckStatsOracle(options.work_dir, options.seed));
  add(CheckThroughput(options.throughput_seconds));

  if (options.training) {
    harness::PresetOptions po;
    po.seed = options.seed;
    const std::string runs = (std::filesystem::path(options.work_dir) / "runs").string();
    std::filesystem::remove_all(runs);
    const auto run_preset = [&](const std::string& name,
                                const harness::PresetOptions& o) -> std::optional<harness::PresetResult> {
      try {
        return harness::RunPreset(name, runs, o, options.progress);
      } catch (const std::exception& e) {
        if (options.progress) options.progress(name + " failed: " + e.what());
        return std::nullopt;
      }
    };
    const auto failed = [](const std::string& id, const std::string& title) {
      CheckResult r;
      r.id = id;
      r.title = title;
      r.detail = "training run failed";
      return r;
    };
    const auto t2 = run_preset("EXP-T2", po);
    add(t2 ? CheckEvalScoreRate(*t2) : failed("P7", "1v1 DQN with possession shaping"));
    const auto t1 = run_preset("EXP-T1", po);
    add(t1 && t2 ? CheckShapingBeatsSparse(*t2, *t1)
                 : failed("P8", "Shaping beats sparse"));
    const auto localmin = run_preset("EXP-PPO-LOCALMIN", po);
    add(localmin ? CheckPpoLocalMinimum(*localmin) : failed("P9", "PPO own-half holding"));
    harness::PresetOptions smoke = po;
    smoke.budget = options.central_budget;
    smoke.eval_every = options.central_budget / 2;
    smoke.final_eval_episodes = 50;
    const auto central = run_preset("EXP-CENTRAL", smoke);
    add(central ? CheckJointAction(*central,
                                   (std::filesystem::path(runs) / "EXP-CENTRAL").string())
                : failed("P10", "Joint-action plumbing"));
  }
  add(CheckCheckpointRoundTrip(options.work_dir, options.seed));
  return out;
}

}  // namespace sts2::checks
