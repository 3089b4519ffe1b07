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

#ifndef AH_REPLAY_H_
#define AH_REPLAY_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ah/env_config.h"
#include "ah/environment.h"
#include "ah/metrics.h"

namespace ah {

// Line-oriented text format:
//
//   AHREPLAY <version>
//   experiment <name>
//   episode <seed> <episode> <episode_seed>
//   env <config json on one line>
//   steps <T>
//   <N action indices>          (T lines)
//   final <color counts after the last step>
//   end <T>
inline constexpr int kReplayVersion = 1;

struct EpisodeReplay {
  std::string experiment;
  uint64_t seed = 0;
  int episode = 0;
  EnvConfig env;
  std::vector<std::vector<Action>> actions;
  std::vector<int> final_color_counts;
  bool operator==(const EpisodeReplay&) const = default;
};

EpisodeReplay ReplayFromLog(const TrajectoryLog& log,
                            const std::string& experiment, uint64_t seed,
                            int episode);

std::string SerializeReplay(const EpisodeReplay& replay);
// Throws VersionMismatch for another format version and CorruptReplay for
// any framing or content error.
EpisodeReplay ParseReplay(const std::string& text);

void WriteReplay(const std::string& path, const EpisodeReplay& replay);
EpisodeReplay ReadReplay(const std::string& path);

// Steps a fresh environment through the recorded actions. Throws
// CorruptReplay if the recorded final counts are not reproduced.
TrajectoryLog Resimulate(const EpisodeReplay& replay);

}  // namespace ah

#endif  // AH_REPLAY_H_
