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

#include "ah/rollout.h"

#include <cstdlib>
#include <exception>
#include <memory>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ah/environment.h"
#include "ah/errors.h"
#include "ah/observation.h"

namespace ah {

TrajectoryLog PlayEpisode(const EnvConfig& config,
                          std::span<Agent* const> controllers) {
  if (static_cast<int>(controllers.size()) != config.num_players) {
    throw InvalidArgument("need one controller per player");
  }
  Environment env(config);
  const int n = config.num_players;
  TrajectoryLog log;
  log.config = config;
  log.seed = config.seed;
  log.initial_color_counts = env.state().color_counts;
  log.steps.reserve(config.episode_length);

  std::vector<Observation> obs =
      RenderAllSerial(config, env.state(), ObservationMode::kSymbolic);
  std::vector<Action> actions(n);
  std::vector<uint8_t> acting(n);
  std::vector<int> recolored(n);
  while (!env.Done()) {
    const int step = env.state().step;
    for (int i = 0; i < n; ++i) {
      acting[i] = !env.state().players[i].removed;
      actions[i] = acting[i] ? controllers[i]->Act(obs[i], i)
                             : Action::kTurnLeft;
    }
    StepResult result = env.Step(actions);
    std::vector<Observation> next =
        RenderAllSerial(config, env.state(), ObservationMode::kSymbolic);
    std::fill(recolored.begin(), recolored.end(), 0);
    for (const PlantEvent& p : result.events.plants) ++recolored[p.player];
    const bool terminal = env.Done();
    for (int i = 0; i < n; ++i) {
      if (!acting[i]) continue;
      Transition t;
      t.observation = &obs[i];
      t.action = actions[i];
      t.reward = result.rewards[i];
      t.next_observation = &next[i];
      t.terminal = terminal;
      t.step = step;
      t.recolored = recolored[i];
      controllers[i]->Observe(t, i);
    }
    StepRecord record;
    record.actions = actions;
    record.rewards = std::move(result.rewards);
    record.events = std::move(result.events);
    record.color_counts = env.state().color_counts;
    log.steps.push_back(std::move(record));
    obs = std::move(next);
  }
  return log;
}

TrajectoryLog RunTask(const RolloutTask& task) {
  const AgentContext ctx = ContextFor(task.env);
  std::vector<std::unique_ptr<Agent>> agents;
  std::vector<Agent*> controllers;
  for (size_t i = 0; i < task.specs.size(); ++i) {
    const uint64_t seed = ExpandSeed(task.agent_seed, i, kAgentStream);
    agents.push_back(MakeAgent(task.specs[i], ctx, seed));
    agents.back()->BeginEpisode(seed);
    controllers.push_back(agents.back().get());
  }
  return PlayEpisode(task.env, controllers);
}

std::vector<TrajectoryLog> RolloutSerial(std::span<const RolloutTask> tasks) {
  std::vector<TrajectoryLog> logs;
  logs.reserve(tasks.size());
  for (const RolloutTask& task : tasks) logs.push_back(RunTask(task));
  return logs;
}

std::vector<TrajectoryLog> RolloutParallel(
    std::span<const RolloutTask> tasks) {
  std::vector<TrajectoryLog> logs(tasks.size());
  std::exception_ptr failure;
  const int count = static_cast<int>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < count; ++i) {
    try {
      logs[i] = RunTask(tasks[i]);
    } catch (...) {
#pragma omp critical(ah_rollout_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return logs;
}

int ConfigureThreads() {
#ifdef _OPENMP
  if (const char* value = std::getenv("AH_NUM_THREADS")) {
    const int n = std::atoi(value);
    if (n > 0) omp_set_num_threads(n);
  }
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ah
