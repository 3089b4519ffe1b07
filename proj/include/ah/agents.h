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

#ifndef AH_AGENTS_H_
#define AH_AGENTS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ah/actor_critic.h"
#include "ah/env_config.h"
#include "ah/environment.h"
#include "ah/observation.h"
#include "ah/rng.h"

namespace ah {

enum class AgentKind {
  kTasteSeeker,
  kFreeRider,
  kConventionist,
  kRandom,
  kInert,
  kLearner,
};

std::string ToString(AgentKind kind);
AgentKind ParseAgentKind(const std::string& name);

enum class FeatureSet {
  // 7x7 crop around the player (5 ahead, 1 behind, 3 to each side) with
  // four channels per cell: ripe-berry reward under the agent's own
  // profile, unripe berry of the preferred color, other unripe berry,
  // blocked. Plus the zap cooldown.
  kCompact,
  // The whole symbolic window flattened, plus the zap cooldown.
  kWindow,
};

std::string ToString(FeatureSet set);
FeatureSet ParseFeatureSet(const std::string& name);

struct LearnerSpec {
  ActorCriticParams network;
  FeatureSet features = FeatureSet::kCompact;
  bool operator==(const LearnerSpec&) const = default;
};

struct AgentSpec {
  AgentKind kind = AgentKind::kRandom;
  RewardProfile profile;
  // Color a taste-seeker plants; defaults to the profile's preferred color.
  std::optional<int> target_color;
  // Maximum recolorings per episode, -1 for unlimited.
  int plant_budget = -1;
  LearnerSpec learner;

  bool operator==(const AgentSpec&) const = default;
};

// What an agent knows about the world beyond its observations.
struct AgentContext {
  int num_colors = 5;
  int beam_length = 3;
  int beam_width = 1;
  int num_actions() const { return 7 + num_colors; }
};
AgentContext ContextFor(const EnvConfig& config);

struct Transition {
  const Observation* observation = nullptr;
  Action action = Action::kTurnLeft;
  double reward = 0.0;
  const Observation* next_observation = nullptr;
  bool terminal = false;
  // Step index of `observation`; must increase along a stream.
  int step = 0;
  // Berries recolored by this player's action.
  int recolored = 0;
};

class Agent {
 public:
  Agent(AgentSpec spec, AgentContext context, uint64_t seed)
      : spec_(std::move(spec)), context_(context), rng_(seed) {}
  virtual ~Agent() = default;

  // `stream` identifies the player slot the agent is controlling.
  virtual Action Act(const Observation& observation, int stream) = 0;
  virtual void Observe(const Transition& transition, int stream);
  virtual void BeginEpisode(uint64_t seed);

  const AgentSpec& spec() const { return spec_; }
  const AgentContext& context() const { return context_; }

 protected:
  AgentSpec spec_;
  AgentContext context_;
  Rng rng_;
  int plants_used_ = 0;
};

std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec, AgentContext context,
                                 uint64_t seed);

// Scripted navigation inside the observation window. Moves are egocentric;
// breadth-first search over free cells, ties broken row-major.
namespace scripted {

struct WindowCell {
  int row;
  int col;
  bool operator==(const WindowCell&) const = default;
};

bool Passable(const Observation& obs, int row, int col);
bool HasBerry(const Observation& obs, int row, int col, int* color,
              bool* ripe);

// First move toward the nearest cell satisfying `is_target`, if reachable.
std::optional<Action> PathToward(
    const Observation& obs, const std::function<bool(int, int)>& is_target);

// Plant beam cells (window coordinates, nearest first) if the player turned
// by `quarter_turns` clockwise quarter turns (0 = as facing).
std::vector<WindowCell> BeamCells(const AgentContext& ctx,
                                  const Observation& obs, int quarter_turns);

}  // namespace scripted

// Features used by the learner for an observation and profile.
std::vector<double> ExtractFeatures(FeatureSet set, const Observation& obs,
                                    const RewardProfile& profile);
int FeatureCount(FeatureSet set, int num_colors);

class LearnerAgent : public Agent {
 public:
  LearnerAgent(AgentSpec spec, AgentContext context, uint64_t seed);

  Action Act(const Observation& observation, int stream) override;
  void Observe(const Transition& transition, int stream) override;

  // Flushes any partial segments without bootstrapping beyond them.
  void FlushAll();

  ActorCritic& network() { return network_; }
  const ActorCritic& network() const { return network_; }
  int64_t transitions_seen() const { return transitions_; }

 private:
  struct Stream {
    std::vector<SegmentStep> segment;
    std::vector<double> next_features;
    int last_step = -1;
    bool open = false;
  };
  void Flush(Stream& stream, const std::vector<double>* bootstrap_features);

  ActorCritic network_;
  std::vector<Stream> streams_;
  int64_t transitions_ = 0;
};

struct Resampling {
  bool pooled = false;
  int pool_size = 0;
  // Pool members per distinct profile, in order of first appearance.
  std::vector<int> group_counts;
  bool operator==(const Resampling&) const = default;
};

// Owns the agents of one run. Without pooling agent i always controls
// player i; with pooling every episode draws the player slots from the pool
// with replacement.
class Population {
 public:
  Population(std::vector<AgentSpec> specs, Resampling resampling,
             int num_players, AgentContext context, uint64_t seed);

  std::vector<int> DrawBinding(Rng& pool_rng) const;

  Agent& agent(int index) { return *agents_[index]; }
  const Agent& agent(int index) const { return *agents_[index]; }
  int size() const { return static_cast<int>(agents_.size()); }
  int num_players() const { return num_players_; }
  const Resampling& resampling() const { return resampling_; }

 private:
  std::vector<std::unique_ptr<Agent>> agents_;
  Resampling resampling_;
  int num_players_;
};

// Binary checkpoint: magic "AHCK", format version, experiment id, agent id,
// step, then weights and optimizer state as little-endian doubles.
inline constexpr uint32_t kCheckpointVersion = 1;
void SaveCheckpoint(const std::string& path, const std::string& experiment_id,
                    int agent_id, int64_t step, const ActorCritic& network);
struct CheckpointHeader {
  std::string experiment_id;
  int agent_id = 0;
  int64_t step = 0;
};
CheckpointHeader LoadCheckpoint(const std::string& path, ActorCritic& network);
std::string ManifestText(const AgentSpec& spec);

}  // namespace ah

#endif  // AH_AGENTS_H_
