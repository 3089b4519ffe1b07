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

#ifndef AH_EXPERIMENT_H_
#define AH_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ah/agents.h"
#include "ah/config_io.h"
#include "ah/env_config.h"
#include "ah/metrics.h"

namespace ah {

struct ExperimentConfig {
  std::string name = "experiment";
  // env.seed is ignored; episode seeds come from `seeds`.
  EnvConfig env;
  // Empty means: derive from the reward profiles of each episode.
  GroupSpec groups;
  // One per player, or one per pool member when resampling.
  std::vector<AgentSpec> agents;
  Resampling resampling;
  int episodes = 1;
  std::vector<uint64_t> seeds = {0};
  std::string output_dir;
  int bucket_size = 200;

  // Throws InvalidConfig naming the offending field.
  void Validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

Json ToJson(const ExperimentConfig& config);
ExperimentConfig ExperimentConfigFromJson(const Json& json);
ExperimentConfig LoadExperimentConfig(const std::string& path);

// Seed of episode e under master seed s: ExpandSeed(s, e, kEnvStream).
uint64_t EpisodeSeed(uint64_t master_seed, int episode);

// Preset names; parameterized presets take ":<arg>" (critical-mass:<size of
// the largest group>, intensity-between:<small-group reward>,
// brightness:<bright color>).
std::vector<std::string> PresetNames();
// Throws UnknownPreset.
ExperimentConfig Preset(const std::string& name);

// Agents of a preset default to learners; this swaps every spec's kind.
void SetAgentKind(ExperimentConfig& config, AgentKind kind);
// Scales c3 down so ripening no longer saturates (c3 = 3e-9).
void UseCalibratedRipening(ExperimentConfig& config);

// Palette indices used by the presets.
enum PresetColor { kRed = 0, kGreen = 1, kBlue = 2, kYellow = 3, kMagenta = 4 };

struct EpisodeSummary {
  uint64_t seed = 0;
  int episode = 0;
  uint64_t episode_seed = 0;
  double returns = 0.0;
  int64_t eats = 0;
  int64_t plants = 0;
  int64_t plants_most_common = 0;
  int64_t zaps = 0;
  std::vector<double> final_signature;
  // Absent when fewer than two preferred colors are present.
  std::optional<double> conventionality;
  double mean_monoculture = 0.0;
  double final_entropy = 0.0;
};

struct EpisodeResult {
  EpisodeSummary summary;
  TrajectoryLog log;
  TallyReport tally;
  std::string table_csv;
};

struct RunResult {
  // Ordered by (seed, episode) as listed in the config.
  std::vector<EpisodeResult> episodes;
  std::string summary_json;
};

struct RunOptions {
  // Write config, replays, tables, summary and checkpoints to output_dir.
  bool write_outputs = true;
  bool parallel = true;
};

// Relative file names inside a run directory.
std::string ReplayPath(uint64_t seed, int episode);
std::string TablePath(uint64_t seed, int episode);

RunResult Run(const ExperimentConfig& config, RunOptions options = {});

// Groups used for the metrics of an episode played under `env`.
GroupSpec EpisodeGroups(const ExperimentConfig& config, const EnvConfig& env);

// Metric tables and summary of one finished episode.
EpisodeResult Evaluate(TrajectoryLog log, const GroupSpec& groups,
                       uint64_t seed, int episode, int bucket_size);
std::string SummaryJson(const std::string& name,
                        std::span<const EpisodeResult> episodes);

// Re-simulates the given replays; empty `groups` derives them per replay.
RunResult AnalyzeReplays(std::span<const std::string> paths,
                         const GroupSpec& groups, int bucket_size = 200);
// Re-simulates every replay of a run directory.
RunResult AnalyzeRun(const std::string& dir);

// Compares a re-analysis with the tables and summary stored in `dir`;
// returns the names of files that differ.
std::vector<std::string> VerifyRun(const std::string& dir,
                                   const RunResult& analysis);

struct SweepRow {
  int largest_group = 0;
  double largest_fraction = 0.0;
  int64_t total_eats = 0;
  int64_t plants_most_common = 0;
  // Final signature, averaged over episodes.
  std::vector<double> final_signature;
};

// The critical-mass presets for every size in `sizes`.
std::vector<ExperimentConfig> CriticalMassSweep(std::span<const int> sizes);
SweepRow CriticalMassRow(const ExperimentConfig& config,
                         const RunResult& result);
std::string SweepCsv(std::span<const SweepRow> rows);

}  // namespace ah

#endif  // AH_EXPERIMENT_H_
