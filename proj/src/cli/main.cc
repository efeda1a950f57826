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

// sts2: command-line front end.
//
//   sts2 train --config exp.json [--seed N] [--budget N] [--out DIR]
//   sts2 eval --checkpoint c.ckpt --slots learner,scripted [--episodes N]
//   sts2 crossplay --team-a frozen:a.ckpt --team-b scripted [--episodes N]
//   sts2 preset [NAME] [--list] [--print-config] [--out DIR]
//   sts2 replay --in match.ndjson
//   sts2 selfcheck
//   sts2 serve [--slots human,scripted] [--port 7777] [--record FILE]
//              [--playback FILE]

#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sts2/checks/acceptance.h"
#include "sts2/harness/checkpoint.h"
#include "sts2/harness/evaluate.h"
#include "sts2/harness/experiment.h"
#include "sts2/harness/preset.h"
#include "sts2/harness/train.h"
#include "sts2/replay.h"
#include "sts2/serialize.h"
#include "sts2/server/server.h"

namespace sts2::cli {
namespace {

using harness::SlotSpec;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// scripted[:easy|normal] | learner | frozen:PATH | human
SlotSpec ParseSlot(const std::string& token) {
  const auto colon = token.find(':');
  const std::string kind = token.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : token.substr(colon + 1);
  if (kind == "scripted") {
    ScriptedProfile p;
    if (arg == "easy") {
      p.difficulty = Difficulty::kEasy;
    } else if (!arg.empty() && arg != "normal") {
      throw UsageError("unknown difficulty \"" + arg + "\"");
    }
    return SlotSpec::Scripted(p);
  }
  if (kind == "learner" && arg.empty()) return SlotSpec::Learner();
  if (kind == "frozen" && !arg.empty()) return SlotSpec::Frozen(arg);
  if (kind == "human" && arg.empty()) return SlotSpec::Human();
  throw UsageError("bad slot \"" + token +
                   "\" (expected scripted[:easy], learner, frozen:PATH or human)");
}

std::vector<SlotSpec> ParseSlots(const std::string& list) {
  std::vector<SlotSpec> out;
  for (const std::string& t : Split(list, ',')) out.push_back(ParseSlot(t));
  if (out.empty()) throw UsageError("empty slot list");
  return out;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// Game settings shared by eval, crossplay and serve.
struct GameFlags {
  std::string file;
  std::optional<std::uint64_t> seed;
  bool randomize_start = false;
  std::optional<int> episode_length;

  void Add(CLI::App* app) {
    app->add_option("--game", file, "GameConfig JSON (partial keys allowed)");
    app->add_option("--seed", seed, "Seed");
    app->add_flag("--randomize-start", randomize_start, "Random start layouts");
    app->add_option("--episode-length", episode_length, "Ticks per episode");
  }
  GameConfig Build(int k_from_slots) const {
    GameConfig g;
    if (!file.empty()) ConfigFromJson(ReadJsonFile(file), g);
    g.k = k_from_slots;
    if (seed) g.seed = *seed;
    if (randomize_start) g.randomize_start = true;
    if (episode_length) g.episode_length = *episode_length;
    g.Validate();
    return g;
  }
};

int SlotsToK(std::size_t n) {
  if (n % 2 != 0) throw UsageError("need one slot per player: 2k entries, Home first");
  return static_cast<int>(n / 2);
}

void Progress(const std::string& line) { std::cerr << line << std::endl; }

int RunTrain(const std::string& config_path, std::optional<std::uint64_t> seed,
             std::optional<std::uint64_t> budget, const std::string& out, bool quiet) {
  harness::ExperimentConfig c = harness::LoadExperiment(config_path);
  if (seed) c.seed = *seed;
  if (budget) c.budget = *budget;
  c.Validate();
  harness::TrainOptions options;
  options.out_dir = out;
  if (!quiet) options.progress = Progress;
  const harness::TrainResult r = harness::Train(c, options);
  if (r.final_eval.episodes > 0) std::cout << harness::FormatStatsTable(r.final_eval);
  if (!out.empty()) std::cout << "checkpoint: " << out << "/final.ckpt\n";
  return 0;
}

int RunEval(const std::string& checkpoint, const std::string& slots_arg,
            const GameFlags& flags, int episodes, std::uint64_t seed,
            const std::string& replay_dir, bool json) {
  const auto slots = ParseSlots(slots_arg);
  const GameConfig game = flags.Build(SlotsToK(slots.size()));
  std::shared_ptr<const harness::NetworkPolicy> learner;
  if (!checkpoint.empty()) {
    const harness::Checkpoint ckpt = harness::LoadCheckpoint(checkpoint);
    learner = std::make_shared<harness::NetworkPolicy>(
        harness::NetworkPolicy{ckpt.acting_network(), ckpt.joint_agents});
  }
  const harness::Lineup lineup = harness::Lineup::Build(game, slots, learner);
  if (!replay_dir.empty()) std::filesystem::create_directories(replay_dir);
  const harness::MatchStats s = harness::Evaluate(game, lineup, episodes, seed, replay_dir);
  std::cout << (json ? harness::StatsToJson(s).dump(2) + "\n" : harness::FormatStatsTable(s));
  return 0;
}

int RunCrossplay(const std::string& a, const std::string& b, const GameFlags& flags,
                 int episodes, std::uint64_t seed, bool json) {
  const auto team_a = ParseSlots(a);
  const auto team_b = ParseSlots(b);
  if (team_a.size() != team_b.size()) throw UsageError("teams differ in size");
  const GameConfig game = flags.Build(static_cast<int>(team_a.size()));
  const harness::MatchStats s = harness::Crossplay(game, team_a, team_b, episodes, seed);
  std::cout << "(team A reported as home)\n";
  std::cout << (json ? harness::StatsToJson(s).dump(2) + "\n" : harness::FormatStatsTable(s));
  return 0;
}

int RunPresetCommand(const std::string& name, bool list, bool print_config,
                     const std::string& out, const harness::PresetOptions& options,
                     bool quiet) {
  if (list || name.empty()) {
    for (const std::string& n : harness::PresetNames()) {
      std::printf("%-18s %s\n", n.c_str(), harness::PresetDescription(n).c_str());
    }
    return 0;
  }
  if (print_config) {
    std::cout << harness::ExperimentToJson(harness::PresetExperiment(name, options, out)).dump(2)
              << "\n";
    return 0;
  }
  const harness::PresetResult r =
      harness::RunPreset(name, out, options, quiet ? nullptr : std::function(Progress));
  std::cout << name << "\n" << r.table;
  return 0;
}

int RunReplay(const std::string& path, bool quiet) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream text;
  text << in.rdbuf();
  std::istringstream parse_in(text.str());
  const Replay replay = ParseReplay(parse_in);
  const bool exact = RegenerateReplay(replay) == text.str();
  const harness::MatchStats s = harness::RecountFromReplayFiles({path});
  if (!quiet) {
    std::cout << "ticks: " << replay.frames.size() << "\nconfig hash: "
              << HexU64(replay.config_hash) << "\nhash matches config: "
              << (replay.config_hash == ConfigHash(replay.config) ? "yes" : "no")
              << "\nbyte-exact re-encoding: " << (exact ? "yes" : "no") << "\n";
    if (!replay.frames.empty()) {
      const GameState& last = replay.frames.back().state;
      std::cout << "final score: " << last.score[0] << "-" << last.score[1] << "\n";
    }
    std::cout << harness::FormatStatsTable(s);
  }
  return exact && replay.config_hash == ConfigHash(replay.config) ? 0 : 1;
}

int RunSelfcheckCommand(const std::string& work_dir, std::uint64_t seed, double seconds) {
  int failed = 0;
  checks::RunSelfcheck(work_dir, seed, [&](const checks::CheckResult& r) {
    std::cout << checks::FormatResult(r) << std::endl;
    failed += !r.passed;
  }, seconds);
  return failed == 0 ? 0 : 1;
}

server::MatchServer* g_server = nullptr;

void OnSignal(int) {
  if (g_server) g_server->Stop();
}

int RunServe(const std::string& slots_arg, const GameFlags& flags, double tick_rate,
             const std::string& address, int port, const std::string& record,
             const std::string& playback, const std::string& expect_hash,
             std::optional<bool> autostart, bool exit_when_finished) {
  std::unique_ptr<server::Session> session;
  if (!playback.empty()) {
    std::optional<std::uint64_t> expected;
    if (!expect_hash.empty()) expected = std::stoull(expect_hash, nullptr, 16);
    session = std::make_unique<server::Session>(LoadReplay(playback), tick_rate, expected);
  } else {
    server::SessionConfig c;
    c.slots = ParseSlots(slots_arg);
    c.game = flags.Build(SlotsToK(c.slots.size()));
    c.tick_rate = tick_rate;
    c.autostart = autostart;
    c.replay_path = record;
    c.listen_address = address;
    c.port = port;
    session = std::make_unique<server::Session>(std::move(c));
  }
  server::MatchServer srv(std::move(session), address, port);
  g_server = &srv;
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::cerr << "listening on " << address << ":" << srv.port() << std::endl;
  srv.Run(exit_when_finished);
  g_server = nullptr;
  const GameState& s = srv.session().state();
  std::cerr << "stopped at tick " << s.tick << ", score " << s.score[0] << "-"
            << s.score[1] << std::endl;
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"STS2 team-sports simulator: training, evaluation and match server"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Train one experiment");
  std::string config_path;
  std::optional<std::uint64_t> train_seed;
  std::optional<std::uint64_t> train_budget;
  std::string train_out;
  bool quiet = false;
  train->add_option("--config", config_path, "Experiment JSON")->required();
  train->add_option("--seed", train_seed, "Override the experiment seed");
  train->add_option("--budget", train_budget, "Override the step budget");
  train->add_option("--out", train_out, "Output directory for checkpoints and metrics");
  train->add_flag("--quiet", quiet, "No progress lines");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a lineup");
  std::string eval_ckpt;
  std::string eval_slots;
  int episodes = 500;
  std::uint64_t eval_seed = 1;
  std::string replay_dir;
  bool json = false;
  GameFlags eval_game;
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint acting for 'learner' slots");
  eval->add_option("--slots", eval_slots, "Home then Away, comma separated")->required();
  eval->add_option("--episodes", episodes, "Episodes");
  eval->add_option("--eval-seed", eval_seed, "Evaluation seed");
  eval->add_option("--replay-dir", replay_dir, "Write one replay log per episode");
  eval->add_flag("--json", json, "JSON statistics");
  eval_game.Add(eval);

  // crossplay
  auto* cross = app.add_subcommand("crossplay", "Team A vs team B, alternating ends");
  std::string team_a;
  std::string team_b;
  GameFlags cross_game;
  cross->add_option("--team-a", team_a, "Team A slots")->required();
  cross->add_option("--team-b", team_b, "Team B slots")->required();
  cross->add_option("--episodes", episodes, "Episodes");
  cross->add_option("--eval-seed", eval_seed, "Evaluation seed");
  cross->add_flag("--json", json, "JSON statistics");
  cross_game.Add(cross);

  // preset
  auto* preset = app.add_subcommand("preset", "Run or inspect a preset experiment");
  std::string preset_name;
  bool list = false;
  bool print_config = false;
  std::string preset_out = "runs";
  harness::PresetOptions preset_options;
  preset->add_option("name", preset_name, "Preset name");
  preset->add_flag("--list", list, "List presets");
  preset->add_flag("--print-config", print_config, "Print the experiment JSON");
  preset->add_option("--out", preset_out, "Output directory");
  preset->add_option("--seed", preset_options.seed, "Seed");
  preset->add_option("--budget", preset_options.budget, "Override every step budget");
  preset->add_option("--final-eval-episodes", preset_options.final_eval_episodes,
                     "Final evaluation episodes");
  preset->add_option("--eval-episodes", preset_options.eval_episodes,
                     "Periodic evaluation episodes");
  preset->add_option("--eval-every", preset_options.eval_every, "Steps between evaluations");
  preset->add_flag("--quiet", quiet, "No progress lines");

  // replay
  auto* replay = app.add_subcommand("replay", "Verify a replay log and print its stats");
  std::string replay_in;
  replay->add_option("--in", replay_in, "Replay log")->required();
  replay->add_flag("--quiet", quiet, "Exit status only");

  // selfcheck
  auto* selfcheck = app.add_subcommand(
      "selfcheck", "Determinism, gradient, reward, quirk, stats and checkpoint suites");
  std::string work_dir = "selfcheck_work";
  double bench_seconds = 10.0;
  std::uint64_t check_seed = 1;
  selfcheck->add_option("--work-dir", work_dir, "Scratch directory");
  selfcheck->add_option("--seed", check_seed, "Seed");
  selfcheck->add_option("--bench-seconds", bench_seconds, "Throughput benchmark length");

  // serve
  auto* serve = app.add_subcommand("serve", "Live match server (TCP lines or WebSocket)");
  std::string serve_slots = "human,scripted";
  double tick_rate = 30.0;
  std::string address = "127.0.0.1";
  int port = 7777;
  std::string record;
  std::string playback;
  std::string expect_hash;
  std::optional<bool> autostart;
  bool exit_when_finished = false;
  GameFlags serve_game;
  serve->add_option("--slots", serve_slots, "Home then Away, comma separated");
  serve->add_option("--tick-rate", tick_rate, "Ticks per second");
  serve->add_option("--address", address, "Listen address");
  serve->add_option("--port", port, "Listen port (0: any free port)");
  serve->add_option("--record", record, "Write the replay log here");
  serve->add_option("--playback", playback, "Stream a recorded log instead of simulating");
  serve->add_option("--expect-hash", expect_hash, "Warn clients if the log hash differs");
  serve->add_option("--autostart", autostart, "Start without waiting for the owner");
  serve->add_flag("--exit-when-finished", exit_when_finished, "Exit after the match ends");
  serve_game.Add(serve);

  CLI11_PARSE(app, argc, argv);

  if (*train) return RunTrain(config_path, train_seed, train_budget, train_out, quiet);
  if (*eval) {
    return RunEval(eval_ckpt, eval_slots, eval_game, episodes, eval_seed, replay_dir, json);
  }
  if (*cross) return RunCrossplay(team_a, team_b, cross_game, episodes, eval_seed, json);
  if (*preset) {
    return RunPresetCommand(preset_name, list, print_config, preset_out, preset_options, quiet);
  }
  if (*replay) return RunReplay(replay_in, quiet);
  if (*selfcheck) return RunSelfcheckCommand(work_dir, check_seed, bench_seconds);
  if (*serve) {
    return RunServe(serve_slots, serve_game, tick_rate, address, port, record, playback,
                    expect_hash, autostart, exit_when_finished);
  }
  return 2;
}

}  // namespace
}  // namespace sts2::cli

int main(int argc, char** argv) {
  try {
    return sts2::cli::Main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
