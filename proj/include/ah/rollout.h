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

#ifndef AH_ROLLOUT_H_
#define AH_ROLLOUT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ah/agents.h"
#include "ah/env_config.h"
#include "ah/metrics.h"

namespace ah {

// Plays one full episode. controllers[i] drives player i and receives every
// transition of that player (stream id i). Agents always act on symbolic
// observations, whatever the config's observation mode.
TrajectoryLog PlayEpisode(const EnvConfig& config,
                          std::span<Agent* const> controllers);

// An independent episode with fresh agents: player i gets specs[i] seeded
// from ExpandSeed(agent_seed, i, kAgentStream).
struct RolloutTask {
  EnvConfig env;
  std::vector<AgentSpec> specs;
  uint64_t agent_seed = 0;
};

TrajectoryLog RunTask(const RolloutTask& task);

// Reference implementation: tasks in order on the calling thread.
std::vector<TrajectoryLog> RolloutSerial(std::span<const RolloutTask> tasks);

// Tasks spread over OpenMP threads. Output order follows task order and is
// identical to RolloutSerial.
std::vector<TrajectoryLog> RolloutParallel(std::span<const RolloutTask> tasks);

// Reads AH_NUM_THREADS and applies it to OpenMP. Returns the thread count
// in effect.
int ConfigureThreads();

}  // namespace ah

#endif  // AH_ROLLOUT_H_
