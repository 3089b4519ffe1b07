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

#include "ah/experiment.h"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <mutex>


#include "ah/errors.h"
#include "ah/replay.h"
#include "ah/rollout.h"

namespace ah {
namespace fs = std::filesystem;

namespace {

constexpr int kDefaultPlayers = 24;
constexpr int kDefaultBerries = 685;
constexpr int kColors = 5;

std::vector<int> Monoculture(int color) {
  std::vector<int> counts(kColors, 0);
  counts[color] = kDefaultBerries;
  return counts;
}

// Builds a config whose players are laid out group after group.
struct GroupLayout {
  int size;
  RewardProfile profile;
};

ExperimentConfig FromLayout(const std::string& name,
                            const std::vector<GroupLayout>& layout,
                            std::vector<int> initial_counts) {
  ExperimentConfig config;
  config.name = name;
  config.env.initial_color_counts = std::move(initial_counts);
  config.env.reward_profiles.clear();
  for (const GroupLayout& g : layout) {
    for (int i = 0; i < g.size; ++i) {
      config.env.reward_profiles.push_back(g.profile);
    }
  }
  config.env.num_players =
      static_cast<int>(config.env.reward_profiles.size());
  config.groups = GroupsFromProfiles(config.env.reward_profiles);
  for (const RewardProfile& p : config.env.reward_profiles) {
    AgentSpec spec;
    spec.kind = AgentKind::kLearner;
    spec.profile = p;
    config.agents.push_back(spec);
  }
  return config;
}

RewardProfile Prefers(int color, double reward = kDefaultPreferredReward) {
  return RewardProfile::Preferring(color, kColors, reward);
}

std::vector<GroupLayout> EvenFour() {
  return {{6, Prefers(kRed)}, {6, Prefers(kGreen)}, {6, Prefers(kBlue)},
          {6, Prefers(kYellow)}};
}

std::vector<int> Pentaculture() {
  return std::vector<int>(kColors, kDefaultBerries / kColors);
}

ExperimentConfig CriticalMass(int largest) {
  if (largest < 1 || largest > kDefaultPlayers) {
    throw UnknownPreset("critical-mass: size must lie in [1, 24]");
  }
  const int rest = kDefaultPlayers - largest;
  std::vector<GroupLayout> layout = {{largest, Prefers(kYellow)}};
  for (int k = 0; k < 3; ++k) {
    const int size = rest / 3 + (k < rest % 3 ? 1 : 0);
    if (size > 0) layout.push_back({size, Prefers(k)});
  }
  return FromLayout("critical-mass:" + std::to_string(largest), layout,
                    Pentaculture());
}

ExperimentConfig IntensityBetween(double reward) {
  if (!(reward > 1.0)) {
    throw UnknownPreset("intensity-between: reward must exceed 1");
  }
  return FromLayout("intensity-between:" + FormatDouble(reward),
                    {{16, Prefers(kRed)}, {8, Prefers(kGreen, reward)}},
                    Pentaculture());
}

ExperimentConfig IntensityWithin() {
  std::vector<GroupLayout> layout = {{8, Prefers(kRed, 3)},
                                     {8, Prefers(kGreen, 3)}};
  for (double r : {2, 2, 2, 3, 3, 3, 4, 5}) {
    layout.push_back({1, Prefers(kBlue, r)});
  }
  ExperimentConfig config =
      FromLayout("intensity-within", layout, Pentaculture());
  config.env.color_palette = {{200, 0, 0},
                              {0, 200, 0},
                              {0, 0, 200},
                              {120, 120, 120},
                              {80, 80, 80}};
  // The varied-intensity players form one group around the mean reward.
  Group varied{kBlue, {}, Prefers(kBlue, 3)};
  for (int i = 16; i < 24; ++i) varied.members.push_back(i);
  config.groups.groups.resize(2);
  config.groups.groups.push_back(std::move(varied));
  return config;
}

ExperimentConfig Brightness(std::optional<int> bright) {
  ExperimentConfig config = FromLayout(
      bright ? "brightness:" + std::to_string(*bright) : "brightness",
      EvenFour(), Pentaculture());
  config.env.color_palette = {{200, 0, 0},
                              {0, 200, 0},
                              {0, 0, 200},
                              {100, 100, 0},
                              {100, 0, 100}};
  const std::vector<Rgb> bright_palette = {{250, 100, 100},
                                           {100, 250, 100},
                                           {100, 100, 250},
                                           {200, 200, 50},
                                           {200, 50, 200}};
  if (bright) {
    if (*bright < 0 || *bright >= kColors) {
      throw UnknownPreset("brightness: color must lie in [0, 4]");
    }
    config.env.color_palette[*bright] = bright_palette[*bright];
  }
  return config;
}

ExperimentConfig Resampled() {
  ExperimentConfig config = FromLayout("resampling", EvenFour(), Pentaculture());
  config.groups = {};
  config.agents.clear();
  const std::vector<std::pair<int, int>> pool = {
      {kRed, 5}, {kBlue, 3}, {kGreen, 2}, {kYellow, 2}};
  for (const auto& [color, count] : pool) {
    for (int i = 0; i < count; ++i) {
      AgentSpec spec;
      spec.kind = AgentKind::kLearner;
      spec.profile = Prefers(color);
      config.agents.push_back(spec);
    }
    config.resampling.group_counts.push_back(count);
  }
  config.resampling.pooled = true;
  config.resampling.pool_size = 12;
  return config;
}

int ParseIntArg(const std::string& name, const std::string& arg) {
  try {
    size_t used = 0;
    const int v = std::stoi(arg, &used);
    if (used == arg.size()) return v;
  } catch (const std::exception&) {
  }
  throw UnknownPreset(name + ": bad argument '" + arg + "'");
}

double ParseDoubleArg(const std::string& name, const std::string& arg) {
  try {
    size_t used = 0;
    const double v = std::stod(arg, &used);
    if (used == arg.size()) return v;
  } catch (const std::exception&) {
  }
  throw UnknownPreset(name + ": bad argument '" + arg + "'");
}

void EnsureDir(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw IoFailure("cannot create " + path.string() + ": " + ec.message());
}

Json DoubleOrNull(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

void ExperimentConfig::Validate() const {
  env.Validate();
  if (episodes < 1) throw InvalidConfig("episodes: must be positive");
  if (seeds.empty()) throw InvalidConfig("seeds: need at least one seed");
  if (bucket_size < 1) throw InvalidConfig("bucket_size: must be positive");
  if (resampling.pooled) {
    if (static_cast<int>(agents.size()) != resampling.pool_size) {
      throw InvalidConfig("agents: need one spec per pool member");
    }
  } else {
    if (static_cast<int>(agents.size()) != env.num_players) {
      throw InvalidConfig("agents: need one spec per player");
    }
    for (int i = 0; i < env.num_players; ++i) {
      if (agents[i].profile != env.reward_profiles[i]) {
        throw InvalidConfig("agents: profile of agent " + std::to_string(i) +
                            " differs from reward_profiles");
      }
    }
  }
  for (const AgentSpec& a : agents) {
    if (a.profile.num_colors() != env.num_colors) {
      throw InvalidConfig("agents: profile length differs from num_colors");
    }
  }
  if (!groups.groups.empty() && !resampling.pooled) {
    try {
      groups.Membership(env.num_players);
    } catch (const InvalidArgument& e) {
      throw InvalidConfig(std::string("groups: ") + e.what());
    }
  }
}

Json ToJson(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  j["env"] = ToJson(c.env);
  j["groups"] = ToJson(c.groups);
  Json agents = Json::array();
  for (const AgentSpec& a : c.agents) agents.push_back(ToJson(a));
  j["agents"] = agents;
  j["resampling"] = ToJson(c.resampling);
  j["episodes"] = c.episodes;
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir;
  j["bucket_size"] = c.bucket_size;
  return j;
}

ExperimentConfig ExperimentConfigFromJson(const Json& j) {
  if (!j.is_object()) throw InvalidConfig("experiment: expected an object");
  ExperimentConfig c;
  c.agents.clear();
  try {
    if (j.contains("name")) c.name = j.at("name").get<std::string>();
    if (j.contains("env")) c.env = EnvConfigFromJson(j.at("env"));
    if (j.contains("groups")) c.groups = GroupSpecFromJson(j.at("groups"));
    if (j.contains("agents")) {
      for (const Json& a : j.at("agents")) {
        c.agents.push_back(AgentSpecFromJson(a));
      }
    }
    if (j.contains("resampling")) {
      c.resampling = ResamplingFromJson(j.at("resampling"));
    }
    if (j.contains("episodes")) c.episodes = j.at("episodes").get<int>();
    if (j.contains("seeds")) {
      c.seeds = j.at("seeds").get<std::vector<uint64_t>>();
    }
    if (j.contains("output_dir")) {
      c.output_dir = j.at("output_dir").get<std::string>();
    }
    if (j.contains("bucket_size")) {
      c.bucket_size = j.at("bucket_size").get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("experiment: ") + e.what());
  }
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  return ExperimentConfigFromJson(ParseJson(ReadFile(path)));
}

uint64_t EpisodeSeed(uint64_t master_seed, int episode) {
  return ExpandSeed(master_seed, static_cast<uint64_t>(episode), kEnvStream);
}

std::vector<std::string> PresetNames() {
  return {"setting1",          "setting2",
          "setting3",          "setting4",
          "critical-mass[:<N>]", "long-run",
          "intensity-between[:<R>]", "intensity-within",
          "brightness[:<k>]",  "walls",
          "no-zap",            "indifferent",
          "resampling"};
}

ExperimentConfig Preset(const std::string& full_name) {
  const size_t colon = full_name.find(':');
  const std::string name = full_name.substr(0, colon);
  const std::optional<std::string> arg =
      colon == std::string::npos
          ? std::nullopt
          : std::optional<std::string>(full_name.substr(colon + 1));
  auto no_arg = [&] {
    if (arg) throw UnknownPreset(name + " takes no argument");
  };
  if (name == "setting1") {
    no_arg();
    return FromLayout(name, {{24, Prefers(kYellow)}}, Monoculture(kYellow));
  }
  if (name == "setting2") {
    no_arg();
    return FromLayout(name, EvenFour(), Monoculture(kYellow));
  }
  if (name == "setting3") {
    no_arg();
    return FromLayout(name, {{24, Prefers(kYellow)}}, Pentaculture());
  }
  if (name == "setting4") {
    no_arg();
    return FromLayout(name, EvenFour(), Pentaculture());
  }
  if (name == "critical-mass") {
    return CriticalMass(arg ? ParseIntArg(name, *arg) : kDefaultPlayers);
  }
  if (name == "long-run") {
    no_arg();
    return FromLayout(name,
                      {{11, Prefers(kRed)},
                       {5, Prefers(kGreen)},
                       {4, Prefers(kBlue)},
                       {4, Prefers(kYellow)}},
                      Pentaculture());
  }
  if (name == "intensity-between") {
    return IntensityBetween(arg ? ParseDoubleArg(name, *arg) : 4.0);
  }
  if (name == "intensity-within") {
    no_arg();
    return IntensityWithin();
  }
  if (name == "brightness") {
    return Brightness(arg ? std::optional<int>(ParseIntArg(name, *arg))
                          : std::nullopt);
  }
  if (name == "walls") {
    no_arg();
    ExperimentConfig config = FromLayout(name, EvenFour(), Pentaculture());
    config.env.wall_layout = WallLayout::kQuadrants;
    return config;
  }
  if (name == "no-zap") {
    no_arg();
    ExperimentConfig config = FromLayout(name, EvenFour(), Pentaculture());
    config.env.zap_enabled = false;
    return config;
  }
  if (name == "indifferent") {
    no_arg();
    return FromLayout(name, {{24, RewardProfile::Uniform(kColors)}},
                      Pentaculture());
  }
  if (name == "resampling") {
    no_arg();
    return Resampled();
  }
  throw UnknownPreset("unknown preset '" + full_name + "'");
}

void SetAgentKind(ExperimentConfig& config, AgentKind kind) {
  for (AgentSpec& a : config.agents) a.kind = kind;
}

void UseCalibratedRipening(ExperimentConfig& config) {
  config.env.ripen_c3 = CalibratedRipenC3(config.env.berry_total);
}

std::string ReplayPath(uint64_t seed, int episode) {
  return "replays/seed" + std::to_string(seed) + "_ep" +
         std::to_string(episode) + ".ahr";
}

std::string TablePath(uint64_t seed, int episode) {
  return "tables/seed" + std::to_string(seed) + "_ep" +
         std::to_string(episode) + ".csv";
}

GroupSpec EpisodeGroups(const ExperimentConfig& config, const EnvConfig& env) {
  if (!config.resampling.pooled && !config.groups.groups.empty()) {
    return config.groups;
  }
  return GroupsFromProfiles(env.reward_profiles);
}

EpisodeResult Evaluate(TrajectoryLog log, const GroupSpec& groups,
                       uint64_t seed, int episode, int bucket_size) {
  EpisodeResult result;
  result.log = std::move(log);
  const TrajectoryLog& l = result.log;
  const std::span<const TrajectoryLog> one(&l, 1);
  result.tally = Tally(one, groups, bucket_size);
  result.table_csv = BucketTableCsv(result.tally);

  EpisodeSummary& s = result.summary;
  s.seed = seed;
  s.episode = episode;
  s.episode_seed = l.config.seed;
  for (double r : result.tally.player_returns) s.returns += r;
  s.eats = result.tally.total_eats();
  s.plants = result.tally.total_plants();
  s.plants_most_common = result.tally.plants_most_common;
  s.zaps = result.tally.zaps;
  const std::span<const int> final_counts = l.CountsBefore(l.length());
  s.final_signature = ComputeSignature(final_counts).proportions;
  try {
    s.conventionality = Conventionality(one, groups);
  } catch (const ConventionalityUndefined&) {
    s.conventionality = std::nullopt;
  }
  for (const StepRecord& r : l.steps) {
    s.mean_monoculture += MonocultureFraction(r.color_counts);
  }
  if (!l.steps.empty()) s.mean_monoculture /= l.steps.size();
  s.final_entropy = BerryEntropy(final_counts);
  return result;
}

std::string SummaryJson(const std::string& name,
                        std::span<const EpisodeResult> episodes) {
  Json j;
  j["name"] = name;
  Json list = Json::array();
  double returns = 0.0;
  int64_t eats = 0, plants = 0, most_common = 0, zaps = 0;
  for (const EpisodeResult& e : episodes) {
    const EpisodeSummary& s = e.summary;
    Json row;
    row["seed"] = s.seed;
    row["episode"] = s.episode;
    row["episode_seed"] = s.episode_seed;
    row["returns"] = s.returns;
    row["eats"] = s.eats;
    row["plants"] = s.plants;
    row["plants_most_common"] = s.plants_most_common;
    row["zaps"] = s.zaps;
    row["final_signature"] = s.final_signature;
    row["conventionality"] = DoubleOrNull(s.conventionality);
    row["mean_monoculture"] = s.mean_monoculture;
    row["final_entropy"] = s.final_entropy;
    list.push_back(row);
    returns += s.returns;
    eats += s.eats;
    plants += s.plants;
    most_common += s.plants_most_common;
    zaps += s.zaps;
  }
  j["episodes"] = list;
  Json totals;
  totals["returns"] = returns;
  totals["eats"] = eats;
  totals["plants"] = plants;
  totals["plants_most_common"] = most_common;
  totals["zaps"] = zaps;
  j["totals"] = totals;
  return j.dump(2) + "\n";
}

RunResult Run(const ExperimentConfig& config, RunOptions options) {
  config.Validate();
  const fs::path dir(config.output_dir);
  if (options.write_outputs) {
    if (config.output_dir.empty()) {
      throw InvalidConfig("output_dir: required when writing outputs");
    }
    EnsureDir(dir / "replays");
    EnsureDir(dir / "tables");
    WriteFile((dir / "config.json").string(), ToJson(config).dump(2) + "\n");
  }
  const int num_seeds = static_cast<int>(config.seeds.size());
  std::vector<std::vector<EpisodeResult>> per_seed(num_seeds);
  std::exception_ptr error;
  std::mutex error_mu;
  const AgentContext ctx = ContextFor(config.env);

  auto run_seed = [&](int si) {
    const uint64_t seed = config.seeds[si];
    Population population(config.agents, config.resampling,
                          config.env.num_players, ctx,
                          ExpandSeed(seed, 0, kAgentStream));
    Rng pool_rng(ExpandSeed(seed, 0, kPoolStream));
    const int n = config.env.num_players;
    for (int e = 0; e < config.episodes; ++e) {
      const std::vector<int> binding = population.DrawBinding(pool_rng);
      EnvConfig env = config.env;
      env.seed = EpisodeSeed(seed, e);
      std::vector<Agent*> controllers(n);
      for (int i = 0; i < n; ++i) {
        Agent& agent = population.agent(binding[i]);
        env.reward_profiles[i] = agent.spec().profile;
        controllers[i] = &agent;
      }
      const uint64_t agent_seed = ExpandSeed(seed, e, kAgentStream);
      for (int a = 0; a < population.size(); ++a) {
        population.agent(a).BeginEpisode(ExpandSeed(agent_seed, a, kAgentStream));
      }
      TrajectoryLog log = PlayEpisode(env, controllers);
      for (int a = 0; a < population.size(); ++a) {
        if (auto* learner = dynamic_cast<LearnerAgent*>(&population.agent(a))) {
          learner->FlushAll();
        }
      }
      if (options.write_outputs) {
        WriteReplay((dir / ReplayPath(seed, e)).string(),
                    ReplayFromLog(log, config.name, seed, e));
      }
      EpisodeResult result = Evaluate(std::move(log), EpisodeGroups(config, env),
                                      seed, e, config.bucket_size);
      if (options.write_outputs) {
        WriteFile((dir / TablePath(seed, e)).string(), result.table_csv);
      }
      per_seed[si].push_back(std::move(result));
    }
    if (options.write_outputs) {
      bool any_learner = false;
      for (int a = 0; a < population.size(); ++a) {
        auto* learner = dynamic_cast<LearnerAgent*>(&population.agent(a));
        if (!learner) continue;
        if (!any_learner) EnsureDir(dir / "checkpoints");
        any_learner = true;
        const std::string stem = "checkpoints/seed" + std::to_string(seed) +
                                 "_agent" + std::to_string(a);
        SaveCheckpoint((dir / (stem + ".ahck")).string(), config.name, a,
                       learner->transitions_seen(), learner->network());
        WriteFile((dir / (stem + ".manifest")).string(),
                  ManifestText(learner->spec()));
      }
    }
  };

  auto guarded = [&](int si) {
    try {
      run_seed(si);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
    }
  };
  if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int si = 0; si < num_seeds; ++si) guarded(si);
  } else {
    for (int si = 0; si < num_seeds; ++si) guarded(si);
  }
  if (error) std::rethrow_exception(error);

  RunResult result;
  for (auto& episodes : per_seed) {
    for (EpisodeResult& e : episodes) result.episodes.push_back(std::move(e));
  }
  result.summary_json = SummaryJson(config.name, result.episodes);
  if (options.write_outputs) {
    WriteFile((dir / "summary.json").string(), result.summary_json);
  }
  return result;
}

RunResult AnalyzeReplays(std::span<const std::string> paths,
                         const GroupSpec& groups, int bucket_size) {
  RunResult result;
  std::string name;
  for (const std::string& path : paths) {
    const EpisodeReplay replay = ReadReplay(path);
    if (name.empty()) name = replay.experiment;
    TrajectoryLog log = Resimulate(replay);
    const GroupSpec g =
        groups.groups.empty() ? GroupsFromProfiles(replay.env.reward_profiles)
                              : groups;
    result.episodes.push_back(
        Evaluate(std::move(log), g, replay.seed, replay.episode, bucket_size));
  }
  result.summary_json = SummaryJson(name, result.episodes);
  return result;
}

RunResult AnalyzeRun(const std::string& dir_name) {
  const fs::path dir(dir_name);
  const ExperimentConfig config =
      LoadExperimentConfig((dir / "config.json").string());
  RunResult result;
  for (uint64_t seed : config.seeds) {
    for (int e = 0; e < config.episodes; ++e) {
      const EpisodeReplay replay =
          ReadReplay((dir / ReplayPath(seed, e)).string());
      if (replay.seed != seed || replay.episode != e ||
          replay.env.seed != EpisodeSeed(seed, e)) {
        throw CorruptReplay("replay " + ReplayPath(seed, e) +
                            " does not belong to this run");
      }
      TrajectoryLog log = Resimulate(replay);
      result.episodes.push_back(Evaluate(std::move(log),
                                         EpisodeGroups(config, replay.env),
                                         seed, e, config.bucket_size));
    }
  }
  result.summary_json = SummaryJson(config.name, result.episodes);
  return result;
}

std::vector<std::string> VerifyRun(const std::string& dir_name,
                                   const RunResult& analysis) {
  const fs::path dir(dir_name);
  std::vector<std::string> mismatches;
  for (const EpisodeResult& e : analysis.episodes) {
    const std::string rel = TablePath(e.summary.seed, e.summary.episode);
    if (ReadFile((dir / rel).string()) != e.table_csv) mismatches.push_back(rel);
  }
  if (ReadFile((dir / "summary.json").string()) != analysis.summary_json) {
    mismatches.push_back("summary.json");
  }
  return mismatches;
}

std::vector<ExperimentConfig> CriticalMassSweep(std::span<const int> sizes) {
  std::vector<ExperimentConfig> configs;
  for (int s : sizes) configs.push_back(CriticalMass(s));
  return configs;
}

SweepRow CriticalMassRow(const ExperimentConfig& config,
                         const RunResult& result) {
  SweepRow row;
  const GroupSpec groups = config.groups.groups.empty()
                               ? GroupsFromProfiles(config.env.reward_profiles)
                               : config.groups;
  for (const Group& g : groups.groups) {
    row.largest_group =
        std::max(row.largest_group, static_cast<int>(g.members.size()));
  }
  row.largest_fraction =
      static_cast<double>(row.largest_group) / config.env.num_players;
  row.final_signature.assign(config.env.num_colors, 0.0);
  for (const EpisodeResult& e : result.episodes) {
    row.total_eats += e.summary.eats;
    row.plants_most_common += e.summary.plants_most_common;
    for (int k = 0; k < config.env.num_colors; ++k) {
      row.final_signature[k] += e.summary.final_signature[k];
    }
  }
  if (!result.episodes.empty()) {
    for (double& v : row.final_signature) v /= result.episodes.size();
  }
  return row;
}

std::string SweepCsv(std::span<const SweepRow> rows) {
  std::string out = "largest_group,largest_fraction,total_eats,plants_most_common";
  const int k = rows.empty() ? 0 : static_cast<int>(rows[0].final_signature.size());
  for (int c = 0; c < k; ++c) out += ",signature_c" + std::to_string(c);
  out += '\n';
  for (const SweepRow& r : rows) {
    out += std::to_string(r.largest_group) + ',' +
           FormatDouble(r.largest_fraction) + ',' +
           std::to_string(r.total_eats) + ',' +
           std::to_string(r.plants_most_common);
    for (double v : r.final_signature) out += ',' + FormatDouble(v);
    out += '\n';
  }
  return out;
}

}  // namespace ah
