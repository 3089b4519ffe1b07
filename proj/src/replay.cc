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

#include "ah/replay.h"

#include <sstream>

#include "ah/config_io.h"
#include "ah/errors.h"

namespace ah {
namespace {

std::string NextLine(std::istringstream& in, const char* expected) {
  std::string line;
  if (!std::getline(in, line)) {
    throw CorruptReplay(std::string("truncated replay: missing ") + expected);
  }
  return line;
}

// Splits "key rest" and checks the key.
std::string Field(const std::string& line, const char* key) {
  const std::string prefix = std::string(key) + " ";
  if (line.compare(0, prefix.size(), prefix) != 0) {
    throw CorruptReplay(std::string("expected '") + key + "' line");
  }
  return line.substr(prefix.size());
}

template <typename T>
std::vector<T> ParseInts(const std::string& text, const char* what) {
  std::istringstream in(text);
  std::vector<T> values;
  T v;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw CorruptReplay(std::string("malformed ") + what);
  return values;
}

}  // namespace

EpisodeReplay ReplayFromLog(const TrajectoryLog& log,
                            const std::string& experiment, uint64_t seed,
                            int episode) {
  EpisodeReplay replay;
  replay.experiment = experiment;
  replay.seed = seed;
  replay.episode = episode;
  replay.env = log.config;
  replay.actions.reserve(log.steps.size());
  for (const StepRecord& r : log.steps) replay.actions.push_back(r.actions);
  replay.final_color_counts = log.steps.empty()
                                  ? log.initial_color_counts
                                  : log.steps.back().color_counts;
  return replay;
}

std::string SerializeReplay(const EpisodeReplay& replay) {
  std::ostringstream out;
  out << "AHREPLAY " << kReplayVersion << '\n';
  out << "experiment " << replay.experiment << '\n';
  out << "episode " << replay.seed << ' ' << replay.episode << ' '
      << replay.env.seed << '\n';
  out << "env " << ToJson(replay.env).dump() << '\n';
  out << "steps " << replay.actions.size() << '\n';
  for (const std::vector<Action>& row : replay.actions) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ' ';
      out << static_cast<int>(row[i]);
    }
    out << '\n';
  }
  out << "final";
  for (int c : replay.final_color_counts) out << ' ' << c;
  out << '\n';
  out << "end " << replay.actions.size() << '\n';
  return out.str();
}

EpisodeReplay ParseReplay(const std::string& text) {
  std::istringstream in(text);
  const std::string header = NextLine(in, "header");
  if (header.rfind("AHREPLAY ", 0) != 0) {
    throw CorruptReplay("not a replay file");
  }
  if (header != "AHREPLAY " + std::to_string(kReplayVersion)) {
    throw VersionMismatch("replay format '" + header.substr(9) +
                          "', expected " + std::to_string(kReplayVersion));
  }
  EpisodeReplay replay;
  replay.experiment = Field(NextLine(in, "experiment"), "experiment");
  const auto ids =
      ParseInts<uint64_t>(Field(NextLine(in, "episode"), "episode"), "episode");
  if (ids.size() != 3) throw CorruptReplay("malformed episode line");
  replay.seed = ids[0];
  replay.episode = static_cast<int>(ids[1]);
  try {
    replay.env = EnvConfigFromJson(ParseJson(Field(NextLine(in, "env"), "env")));
    replay.env.Validate();
  } catch (const InvalidConfig& e) {
    throw CorruptReplay(std::string("bad env: ") + e.what());
  }
  if (replay.env.seed != ids[2]) throw CorruptReplay("episode seed mismatch");
  const auto steps =
      ParseInts<int64_t>(Field(NextLine(in, "steps"), "steps"), "steps");
  if (steps.size() != 1 || steps[0] < 0 ||
      steps[0] > replay.env.episode_length) {
    throw CorruptReplay("bad step count");
  }
  const int num_actions = replay.env.num_actions();
  replay.actions.reserve(steps[0]);
  for (int64_t t = 0; t < steps[0]; ++t) {
    const auto row = ParseInts<int>(NextLine(in, "action row"), "action row");
    if (static_cast<int>(row.size()) != replay.env.num_players) {
      throw CorruptReplay("action row " + std::to_string(t) + " has " +
                          std::to_string(row.size()) + " entries");
    }
    std::vector<Action> actions;
    for (int a : row) {
      if (a < 0 || a >= num_actions) throw CorruptReplay("bad action index");
      actions.push_back(static_cast<Action>(a));
    }
    replay.actions.push_back(std::move(actions));
  }
  replay.final_color_counts =
      ParseInts<int>(Field(NextLine(in, "final"), "final"), "final counts");
  const auto end = ParseInts<int64_t>(Field(NextLine(in, "end"), "end"), "end");
  if (end.size() != 1 || end[0] != steps[0]) {
    throw CorruptReplay("end marker does not match step count");
  }
  std::string rest;
  while (std::getline(in, rest)) {
    if (!rest.empty()) throw CorruptReplay("trailing data after end marker");
  }
  return replay;
}

void WriteReplay(const std::string& path, const EpisodeReplay& replay) {
  WriteFile(path, SerializeReplay(replay));
}

EpisodeReplay ReadReplay(const std::string& path) {
  return ParseReplay(ReadFile(path));
}

TrajectoryLog Resimulate(const EpisodeReplay& replay) {
  Environment env(replay.env);
  TrajectoryLog log;
  log.config = replay.env;
  log.seed = replay.env.seed;
  log.initial_color_counts = env.state().color_counts;
  log.steps.reserve(replay.actions.size());
  for (const std::vector<Action>& actions : replay.actions) {
    StepResult result = env.Step(actions);
    StepRecord record;
    record.actions = actions;
    record.rewards = std::move(result.rewards);
    record.events = std::move(result.events);
    record.color_counts = env.state().color_counts;
    log.steps.push_back(std::move(record));
  }
  const std::vector<int>& final_counts = log.steps.empty()
                                             ? log.initial_color_counts
                                             : log.steps.back().color_counts;
  if (final_counts != replay.final_color_counts) {
    throw CorruptReplay("re-simulation does not reproduce the final counts");
  }
  return log;
}

}  // namespace ah
