// Copyright 2026 The Allelopathic Harvest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run presets or config files, re-analyze run
// directories, inspect replays and evaluate the equilibrium checks.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ah/config_io.h"
#include "ah/equilibrium.h"
#include "ah/errors.h"
#include "ah/experiment.h"
#include "ah/replay.h"
#include "ah/rollout.h"

namespace {

namespace fs = std::filesystem;

struct RunArgs {
  std::string preset;
  std::string config;
  uint64_t seed = 0;
  int num_seeds = 1;
  int episodes = 1;
  std::string out = "runs/out";
  std::string agents;
  std::string ripening = "verbatim";
  int bucket = 200;
  std::vector<int> sizes = {6, 9, 12, 15, 18, 21, 24};
  int episode_length = 0;
};

ah::ExperimentConfig PrepareConfig(const RunArgs& args,
                                   ah::ExperimentConfig config) {
  if (!args.agents.empty()) {
    ah::SetAgentKind(config, ah::ParseAgentKind(args.agents));
  }
  if (args.ripening == "calibrated") {
    ah::UseCalibratedRipening(config);
  } else if (args.ripening != "verbatim") {
    throw ah::InvalidConfig("ripening: expected verbatim or calibrated");
  }
  if (args.episode_length > 0) config.env.episode_length = args.episode_length;
  config.episodes = args.episodes;
  config.seeds.clear();
  for (int i = 0; i < args.num_seeds; ++i) config.seeds.push_back(args.seed + i);
  config.bucket_size = args.bucket;
  return config;
}

void PrintTotals(const ah::RunResult& result) {
  int64_t eats = 0, plants = 0, zaps = 0;
  double returns = 0.0;
  for (const ah::EpisodeResult& e : result.episodes) {
    eats += e.summary.eats;
    plants += e.summary.plants;
    zaps += e.summary.zaps;
    returns += e.summary.returns;
  }
  std::cout << "episodes " << result.episodes.size() << "  returns "
            << ah::FormatDouble(returns) << "  eats " << eats << "  plants "
            << plants << "  zaps " << zaps << "\n";
}

int DoRun(const RunArgs& args) {
  if (args.preset.empty() == args.config.empty()) {
    throw ah::InvalidConfig("run: pass exactly one of --preset or --config");
  }
  if (args.preset == "critical-mass") {
    std::vector<ah::SweepRow> rows;
    for (ah::ExperimentConfig config : ah::CriticalMassSweep(args.sizes)) {
      config = PrepareConfig(args, std::move(config));
      std::string dir_name = config.name;
      std::replace(dir_name.begin(), dir_name.end(), ':', '-');
      config.output_dir = (fs::path(args.out) / dir_name).string();
      const ah::RunResult result = ah::Run(config);
      rows.push_back(ah::CriticalMassRow(config, result));
      std::cout << config.name << ": ";
      PrintTotals(result);
    }
    ah::WriteFile((fs::path(args.out) / "sweep.csv").string(),
                  ah::SweepCsv(rows));
    std::cout << ah::SweepCsv(rows);
    return 0;
  }
  ah::ExperimentConfig config =
      args.preset.empty() ? ah::LoadExperimentConfig(args.config)
                          : ah::Preset(args.preset);
  config = PrepareConfig(args, std::move(config));
  config.output_dir = args.out;
  const ah::RunResult result = ah::Run(config);
  PrintTotals(result);
  std::cout << "wrote " << args.out << "\n";
  return 0;
}

int DoAnalyze(const std::string& dir) {
  const ah::RunResult analysis = ah::AnalyzeRun(dir);
  const std::vector<std::string> mismatches = ah::VerifyRun(dir, analysis);
  PrintTotals(analysis);
  if (mismatches.empty()) {
    std::cout << "all tables and summary reproduced exactly\n";
    return 0;
  }
  for (const std::string& m : mismatches) std::cout << "mismatch: " << m << "\n";
  return 1;
}

int DoReplay(const std::string& file, bool summary) {
  const ah::EpisodeReplay replay = ah::ReadReplay(file);
  std::cout << "experiment " << replay.experiment << "  seed " << replay.seed
            << "  episode " << replay.episode << "  steps "
            << replay.actions.size() << "\n";
  if (!summary) return 0;
  ah::TrajectoryLog log = ah::Resimulate(replay);
  const std::vector<ah::EpisodeResult> one = {
      ah::Evaluate(std::move(log),
                   ah::GroupsFromProfiles(replay.env.reward_profiles),
                   replay.seed, replay.episode, 200)};
  std::cout << ah::SummaryJson(replay.experiment, one);
  return 0;
}

int DoThreshold(std::optional<double> delta, double c1, double c3,
                int berries, int curve) {
  if (curve > 1) {
    std::vector<double> deltas;
    for (int i = 1; i <= curve; ++i) deltas.push_back(double(i) / curve);
    std::cout << ah::ComputeThresholdCurve(deltas, c1, c3, berries).Csv();
    return 0;
  }
  if (!delta) throw ah::InvalidArgument("threshold: pass --delta or --curve");
  std::cout << ah::FormatDouble(ah::TasteThreshold(*delta, c1, c3, berries))
            << "\n";
  return 0;
}

int DoDeviation(const std::string& file, int trials) {
  const ah::Json doc = ah::ParseJson(ah::ReadFile(file));
  if (!doc.is_object() || !doc.contains("env") || !doc.contains("deviator")) {
    throw ah::InvalidConfig("deviation: need 'env' and 'deviator' keys");
  }
  ah::EnvConfig env = ah::EnvConfigFromJson(doc.at("env"));
  ah::AgentSpec deviator = ah::AgentSpecFromJson(doc.at("deviator"));
  ah::DeviationOptions options;
  options.trials = trials;
  if (doc.contains("deviator_index")) {
    options.deviator = doc.at("deviator_index").get<int>();
  }
  const ah::DeviationReport r = ah::DeviationTest(env, deviator, options);
  std::cout << "cooperate " << ah::FormatDouble(r.cooperate_return_mean)
            << " +- " << ah::FormatDouble(r.cooperate_halfwidth) << "\n"
            << "deviate   " << ah::FormatDouble(r.deviate_return_mean)
            << " +- " << ah::FormatDouble(r.deviate_halfwidth) << "\n"
            << "measured delta " << ah::FormatDouble(r.measured_delta) << "\n"
            << "verdict " << ah::ToString(r.verdict) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Allelopathic Harvest simulator and analysis toolkit"};
  app.require_subcommand(1);
  app.footer("Worker threads: set AH_NUM_THREADS (default: OpenMP default).");

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--preset", run_args.preset,
                  "Preset name (see `presets`); critical-mass alone sweeps");
  run->add_option("--config", run_args.config, "Experiment config JSON");
  run->add_option("--seed", run_args.seed, "First master seed")
      ->capture_default_str();
  run->add_option("--seeds", run_args.num_seeds,
                  "Number of consecutive master seeds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run->add_option("--episodes", run_args.episodes, "Episodes per seed")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run->add_option("--out", run_args.out, "Output directory")
      ->capture_default_str();
  run->add_option("--agents", run_args.agents,
                  "Override agent kind: taste_seeker, free_rider, "
                  "conventionist, random, inert, learner");
  run->add_option("--ripening", run_args.ripening,
                  "Ripening coefficients: verbatim or calibrated")
      ->capture_default_str();
  run->add_option("--bucket", run_args.bucket, "Metric bucket size in steps")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run->add_option("--episode-length", run_args.episode_length,
                  "Override the episode length (0 keeps the config's)")
      ->capture_default_str();
  run->add_option("--sizes", run_args.sizes,
                  "Yellow-group sizes for the critical-mass sweep")
      ->capture_default_str();

  std::string analyze_dir;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Re-simulate a run and check its outputs");
  analyze->add_option("--in", analyze_dir, "Run directory")->required();

  std::string replay_file;
  bool replay_summary = false;
  CLI::App* replay = app.add_subcommand("replay", "Inspect a replay file");
  replay->add_option("--file", replay_file, "Replay file")->required();
  replay->add_flag("--summary", replay_summary,
                   "Re-simulate and print the episode summary");

  std::optional<double> delta;
  double c1 = ah::kDefaultRipenC1;
  double c3 = ah::kDefaultRipenC3;
  int berries = 685;
  int curve = 0;
  CLI::App* threshold = app.add_subcommand(
      "threshold", "Largest taste ratio at which a deviation does not pay");
  threshold->add_option("--delta", delta, "Monoculture reduction in (0, 1]");
  threshold->add_option("--c1", c1, "Linear ripening coefficient")
      ->capture_default_str();
  threshold->add_option("--c3", c3, "Cubic ripening coefficient")
      ->capture_default_str();
  threshold->add_option("--berries", berries, "Berry total")
      ->capture_default_str();
  threshold->add_option("--curve", curve,
                        "Print the curve at this many evenly spaced deltas");

  std::string deviation_file;
  int trials = 200;
  CLI::App* deviation = app.add_subcommand(
      "deviation", "Monte-Carlo unilateral deviation test");
  deviation->add_option("--config", deviation_file,
                        "JSON with 'env', 'deviator' and optional "
                        "'deviator_index'")
      ->required();
  deviation->add_option("--trials", trials, "Paired trials")
      ->capture_default_str();

  CLI::App* presets = app.add_subcommand("presets", "List preset names");

  CLI11_PARSE(app, argc, argv);
  ah::ConfigureThreads();
  try {
    if (run->parsed()) return DoRun(run_args);
    if (analyze->parsed()) return DoAnalyze(analyze_dir);
    if (replay->parsed()) return DoReplay(replay_file, replay_summary);
    if (threshold->parsed()) {
      return DoThreshold(delta, c1, c3, berries, curve);
    }
    if (deviation->parsed()) return DoDeviation(deviation_file, trials);
    if (presets->parsed()) {
      for (const std::string& name : ah::PresetNames()) {
        std::cout << name << "\n";
      }
      return 0;
    }
  } catch (const ah::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
