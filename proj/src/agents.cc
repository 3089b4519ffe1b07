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

#include "ah/agents.h"

#include <algorithm>
#include <array>
#include <cstring>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "ah/errors.h"

namespace ah {

using scripted::WindowCell;

std::string ToString(AgentKind kind) {
  switch (kind) {
    case AgentKind::kTasteSeeker:
      return "taste_seeker";
    case AgentKind::kFreeRider:
      return "free_rider";
    case AgentKind::kConventionist:
      return "conventionist";
    case AgentKind::kRandom:
      return "random";
    case AgentKind::kInert:
      return "inert";
    case AgentKind::kLearner:
      return "learner";
  }
  return "random";
}

AgentKind ParseAgentKind(const std::string& name) {
  for (AgentKind k :
       {AgentKind::kTasteSeeker, AgentKind::kFreeRider,
        AgentKind::kConventionist, AgentKind::kRandom, AgentKind::kInert,
        AgentKind::kLearner}) {
    if (ToString(k) == name) return k;
  }
  throw InvalidConfig("agent kind: unknown kind '" + name + "'");
}

std::string ToString(FeatureSet set) {
  return set == FeatureSet::kWindow ? "window" : "compact";
}

FeatureSet ParseFeatureSet(const std::string& name) {
  if (name == "compact") return FeatureSet::kCompact;
  if (name == "window") return FeatureSet::kWindow;
  throw InvalidConfig("feature_set: unknown feature set '" + name + "'");
}

AgentContext ContextFor(const EnvConfig& config) {
  return {config.num_colors, config.beam_length, config.beam_width};
}

void Agent::Observe(const Transition& transition, int) {
  plants_used_ += transition.recolored;
}

void Agent::BeginEpisode(uint64_t seed) {
  rng_ = Rng(seed);
  plants_used_ = 0;
}

namespace scripted {
namespace {

constexpr std::array<WindowCell, 4> kNeighbors = {
    WindowCell{-1, 0}, WindowCell{0, -1}, WindowCell{0, 1}, WindowCell{1, 0}};
constexpr std::array<Action, 4> kNeighborMoves = {
    Action::kMoveForward, Action::kStrafeLeft, Action::kStrafeRight,
    Action::kMoveBackward};

bool InWindow(int row, int col) {
  return row >= 0 && col >= 0 && row < kWindowRows && col < kWindowCols;
}

std::array<int, kWindowRows * kWindowCols> Distances(const Observation& obs,
                                                     int row, int col) {
  std::array<int, kWindowRows * kWindowCols> dist;
  dist.fill(-1);
  std::deque<WindowCell> queue;
  dist[row * kWindowCols + col] = 0;
  queue.push_back({row, col});
  while (!queue.empty()) {
    const WindowCell c = queue.front();
    queue.pop_front();
    for (const WindowCell& d : kNeighbors) {
      const int r = c.row + d.row;
      const int k = c.col + d.col;
      if (!InWindow(r, k) || dist[r * kWindowCols + k] >= 0) continue;
      if (!Passable(obs, r, k)) continue;
      dist[r * kWindowCols + k] = dist[c.row * kWindowCols + c.col] + 1;
      queue.push_back({r, k});
    }
  }
  return dist;
}

}  // namespace

bool Passable(const Observation& obs, int row, int col) {
  if (!InWindow(row, col)) return false;
  const ChannelLayout l = obs.layout();
  if (obs.At(row, col, l.wall())) return false;
  if (obs.At(row, col, l.player()) && !obs.At(row, col, l.self())) {
    return false;
  }
  return true;
}

bool HasBerry(const Observation& obs, int row, int col, int* color,
              bool* ripe) {
  if (!InWindow(row, col)) return false;
  for (int k = 0; k < obs.num_colors; ++k) {
    if (obs.At(row, col, k)) {
      if (color) *color = k;
      if (ripe) *ripe = obs.At(row, col, obs.layout().ripe()) != 0;
      return true;
    }
  }
  return false;
}

std::optional<Action> PathToward(
    const Observation& obs, const std::function<bool(int, int)>& is_target) {
  const auto from_self = Distances(obs, kSelfRow, kSelfCol);
  int best = -1;
  for (int i = 0; i < kWindowRows * kWindowCols; ++i) {
    if (from_self[i] <= 0) continue;
    if (!is_target(i / kWindowCols, i % kWindowCols)) continue;
    if (best < 0 || from_self[i] < from_self[best]) best = i;
  }
  if (best < 0) return std::nullopt;
  const auto to_target =
      Distances(obs, best / kWindowCols, best % kWindowCols);
  for (size_t n = 0; n < kNeighbors.size(); ++n) {
    const int r = kSelfRow + kNeighbors[n].row;
    const int c = kSelfCol + kNeighbors[n].col;
    if (!InWindow(r, c)) continue;
    if (to_target[r * kWindowCols + c] == from_self[best] - 1) {
      return kNeighborMoves[n];
    }
  }
  return std::nullopt;
}

std::vector<WindowCell> BeamCells(const AgentContext& ctx,
                                  const Observation& obs, int quarter_turns) {
  WindowCell fwd{-1, 0};
  WindowCell right{0, 1};
  for (int q = 0; q < quarter_turns; ++q) {
    const WindowCell new_fwd = right;
    right = {-fwd.row, -fwd.col};
    fwd = new_fwd;
  }
  const int half = ctx.beam_width / 2;
  std::vector<WindowCell> cells;
  std::vector<uint8_t> blocked(ctx.beam_width, 0);
  for (int j = 1; j <= ctx.beam_length; ++j) {
    for (int l = -half; l <= half; ++l) {
      if (blocked[l + half]) continue;
      const int r = kSelfRow + fwd.row * j + right.row * l;
      const int c = kSelfCol + fwd.col * j + right.col * l;
      if (!InWindow(r, c)) continue;
      if (obs.At(r, c, obs.layout().wall())) {
        blocked[l + half] = 1;
        continue;
      }
      cells.push_back({r, c});
    }
  }
  return cells;
}

}  // namespace scripted

namespace {

bool PlantTarget(const Observation& obs, int row, int col, int color) {
  int c = 0;
  bool ripe = false;
  return scripted::HasBerry(obs, row, col, &c, &ripe) && !ripe && c != color;
}

bool RipeBerry(const Observation& obs, int row, int col,
               std::optional<int> only_color = std::nullopt) {
  int c = 0;
  bool ripe = false;
  if (!scripted::HasBerry(obs, row, col, &c, &ripe) || !ripe) return false;
  return !only_color || c == *only_color;
}

int BeamTargets(const AgentContext& ctx, const Observation& obs, int turns,
                int color) {
  int n = 0;
  for (const WindowCell& w : scripted::BeamCells(ctx, obs, turns)) {
    n += PlantTarget(obs, w.row, w.col, color);
  }
  return n;
}

// True if firing after `turns` quarter turns recolors something and no more
// than `remaining` berries.
bool BeamHits(const AgentContext& ctx, const Observation& obs, int turns,
              int color, int remaining) {
  const int n = BeamTargets(ctx, obs, turns, color);
  return n > 0 && n <= remaining;
}

// Plant if a target is in the beam, turn toward one in beam range, or walk
// next to the nearest one. At most `remaining` berries may be recolored.
std::optional<Action> PlantStep(const AgentContext& ctx,
                                const Observation& obs, int color,
                                bool allow_travel, int remaining) {
  if (BeamHits(ctx, obs, 0, color, remaining)) return PlantAction(color);
  if (!allow_travel) return std::nullopt;
  if (BeamHits(ctx, obs, 1, color, remaining)) return Action::kTurnRight;
  if (BeamHits(ctx, obs, 3, color, remaining)) return Action::kTurnLeft;
  if (BeamHits(ctx, obs, 2, color, remaining)) return Action::kTurnRight;
  // Walk only while any full beam still fits in the budget.
  if (remaining < ctx.beam_length * ctx.beam_width) return std::nullopt;
  return scripted::PathToward(obs, [&](int r, int c) {
    for (int d = 0; d < 4; ++d) {
      static constexpr int kDr[4] = {-1, 0, 0, 1};
      static constexpr int kDc[4] = {0, -1, 1, 0};
      if (PlantTarget(obs, r + kDr[d], c + kDc[d], color)) return true;
    }
    return false;
  });
}

class ScriptedAgent : public Agent {
 public:
  using Agent::Agent;

 protected:
  // Recolorings left this episode.
  int Remaining() const {
    return spec_.plant_budget < 0
               ? std::numeric_limits<int>::max()
               : std::max(0, spec_.plant_budget - plants_used_);
  }

  Action Explore(const Observation& obs) {
    if (scripted::Passable(obs, kSelfRow - 1, kSelfCol) &&
        rng_.Uniform() < 0.8) {
      return Action::kMoveForward;
    }
    return rng_.Uniform() < 0.5 ? Action::kTurnLeft : Action::kTurnRight;
  }
};

class TasteSeekerAgent : public ScriptedAgent {
 public:
  TasteSeekerAgent(AgentSpec spec, AgentContext context, uint64_t seed)
      : ScriptedAgent(std::move(spec), context, seed) {
    color_ = spec_.target_color.value_or(
        spec_.profile.PreferredColor().value_or(0));
  }

  Action Act(const Observation& obs, int) override {
    if (auto a = scripted::PathToward(
            obs, [&](int r, int c) { return RipeBerry(obs, r, c, color_); })) {
      return *a;
    }
    if (Remaining() > 0) {
      if (auto a = PlantStep(context_, obs, color_, true, Remaining())) {
        return *a;
      }
    }
    if (auto a = scripted::PathToward(
            obs, [&](int r, int c) { return RipeBerry(obs, r, c); })) {
      return *a;
    }
    return Explore(obs);
  }

 private:
  int color_ = 0;
};

class FreeRiderAgent : public ScriptedAgent {
 public:
  using ScriptedAgent::ScriptedAgent;

  Action Act(const Observation& obs, int) override {
    if (auto a = scripted::PathToward(
            obs, [&](int r, int c) { return RipeBerry(obs, r, c); })) {
      return *a;
    }
    return Explore(obs);
  }
};

class ConventionistAgent : public ScriptedAgent {
 public:
  using ScriptedAgent::ScriptedAgent;

  Action Act(const Observation& obs, int) override {
    std::vector<int> counts(obs.num_colors, 0);
    for (int r = 0; r < kWindowRows; ++r) {
      for (int c = 0; c < kWindowCols; ++c) {
        int color = 0;
        if (scripted::HasBerry(obs, r, c, &color, nullptr)) ++counts[color];
      }
    }
    const int target = static_cast<int>(
        std::max_element(counts.begin(), counts.end()) - counts.begin());
    if (Remaining() > 0) {
      if (auto a = PlantStep(context_, obs, target, false, Remaining())) {
        return *a;
      }
    }
    if (auto a = scripted::PathToward(
            obs, [&](int r, int c) { return RipeBerry(obs, r, c); })) {
      return *a;
    }
    if (Remaining() > 0) {
      if (auto a = PlantStep(context_, obs, target, true, Remaining())) {
        return *a;
      }
    }
    return Explore(obs);
  }
};

class RandomAgent : public Agent {
 public:
  using Agent::Agent;
  Action Act(const Observation&, int) override {
    return static_cast<Action>(rng_.UniformInt(context_.num_actions()));
  }
};

class InertAgent : public Agent {
 public:
  using Agent::Agent;
  Action Act(const Observation&, int) override { return Action::kTurnLeft; }
};

}  // namespace

int FeatureCount(FeatureSet set, int num_colors) {
  if (set == FeatureSet::kWindow) {
    return kWindowRows * kWindowCols * ChannelLayout{num_colors}.count() + 1;
  }
  return 7 * 7 * 4 + 1;
}

std::vector<double> ExtractFeatures(FeatureSet set, const Observation& obs,
                                    const RewardProfile& profile) {
  std::vector<double> x;
  x.reserve(FeatureCount(set, obs.num_colors));
  if (set == FeatureSet::kWindow) {
    for (uint8_t v : obs.symbolic) x.push_back(v);
    x.push_back(obs.zap_cooldown);
    return x;
  }
  const ChannelLayout l = obs.layout();
  const std::optional<int> preferred = profile.PreferredColor();
  double max_reward = 0.0;
  for (double r : profile.per_color_reward) max_reward = std::max(max_reward, r);
  for (int row = kSelfRow - 5; row <= kSelfRow + 1; ++row) {
    for (int col = kSelfCol - 3; col <= kSelfCol + 3; ++col) {
      int color = 0;
      bool ripe = false;
      double ripe_value = 0.0;
      double unripe_preferred = 0.0;
      double unripe_other = 0.0;
      if (scripted::HasBerry(obs, row, col, &color, &ripe)) {
        if (ripe) {
          ripe_value = profile[color] / max_reward;
        } else if (preferred && color == *preferred) {
          unripe_preferred = 1.0;
        } else {
          unripe_other = 1.0;
        }
      }
      const bool blocked =
          obs.At(row, col, l.wall()) ||
          (obs.At(row, col, l.player()) && !obs.At(row, col, l.self()));
      x.push_back(ripe_value);
      x.push_back(unripe_preferred);
      x.push_back(unripe_other);
      x.push_back(blocked ? 1.0 : 0.0);
    }
  }
  x.push_back(obs.zap_cooldown);
  return x;
}

LearnerAgent::LearnerAgent(AgentSpec spec, AgentContext context,
                           uint64_t seed)
    : Agent(std::move(spec), context, seed),
      network_(FeatureCount(spec_.learner.features, context.num_colors),
               context.num_actions(), spec_.learner.network,
               SplitMix64(seed)) {}

Action LearnerAgent::Act(const Observation& observation, int) {
  const std::vector<double> x =
      ExtractFeatures(spec_.learner.features, observation, spec_.profile);
  return static_cast<Action>(network_.Sample(x, rng_));
}

void LearnerAgent::Observe(const Transition& t, int stream_id) {
  Agent::Observe(t, stream_id);
  if (stream_id < 0) throw InvalidArgument("negative stream id");
  if (static_cast<int>(streams_.size()) <= stream_id) {
    streams_.resize(stream_id + 1);
  }
  Stream& s = streams_[stream_id];
  if (s.open && t.step <= s.last_step) {
    throw OutOfOrderTransition("transition step " + std::to_string(t.step) +
                               " after step " + std::to_string(s.last_step));
  }
  // A gap (the player was zapped out) ends the current segment.
  if (s.open && t.step != s.last_step + 1 && !s.segment.empty()) {
    Flush(s, &s.next_features);
  }
  SegmentStep step;
  step.features =
      ExtractFeatures(spec_.learner.features, *t.observation, spec_.profile);
  step.action = static_cast<int>(t.action);
  step.reward = t.reward;
  s.segment.push_back(std::move(step));
  s.last_step = t.step;
  s.open = true;
  ++transitions_;
  if (t.terminal) {
    Flush(s, nullptr);
    s.open = false;
    s.last_step = -1;
    return;
  }
  s.next_features = t.next_observation
                        ? ExtractFeatures(spec_.learner.features,
                                          *t.next_observation, spec_.profile)
                        : s.segment.back().features;
  if (static_cast<int>(s.segment.size()) >=
      spec_.learner.network.segment_length) {
    Flush(s, &s.next_features);
  }
}

void LearnerAgent::Flush(Stream& s,
                         const std::vector<double>* bootstrap_features) {
  if (s.segment.empty()) return;
  const double bootstrap =
      bootstrap_features ? network_.Forward(*bootstrap_features).value : 0.0;
  network_.PrepareSegment(s.segment, bootstrap);
  network_.Update(s.segment);
  s.segment.clear();
}

void LearnerAgent::FlushAll() {
  for (Stream& s : streams_) {
    if (!s.segment.empty()) Flush(s, &s.next_features);
    s.open = false;
    s.last_step = -1;
  }
}

std::unique_ptr<Agent> MakeAgent(const AgentSpec& spec, AgentContext context,
                                 uint64_t seed) {
  switch (spec.kind) {
    case AgentKind::kTasteSeeker:
      return std::make_unique<TasteSeekerAgent>(spec, context, seed);
    case AgentKind::kFreeRider:
      return std::make_unique<FreeRiderAgent>(spec, context, seed);
    case AgentKind::kConventionist:
      return std::make_unique<ConventionistAgent>(spec, context, seed);
    case AgentKind::kRandom:
      return std::make_unique<RandomAgent>(spec, context, seed);
    case AgentKind::kInert:
      return std::make_unique<InertAgent>(spec, context, seed);
    case AgentKind::kLearner:
      return std::make_unique<LearnerAgent>(spec, context, seed);
  }
  throw InvalidArgument("unknown agent kind");
}

Population::Population(std::vector<AgentSpec> specs, Resampling resampling,
                       int num_players, AgentContext context, uint64_t seed)
    : resampling_(std::move(resampling)), num_players_(num_players) {
  if (!resampling_.pooled) {
    if (static_cast<int>(specs.size()) != num_players) {
      throw InvalidArgument("spec-count mismatch: " +
                            std::to_string(specs.size()) + " specs for " +
                            std::to_string(num_players) + " players");
    }
  } else {
    int sum = 0;
    for (int c : resampling_.group_counts) sum += c;
    if (sum != resampling_.pool_size) {
      throw InvalidArgument("pool group counts sum to " +
                            std::to_string(sum) + ", expected " +
                            std::to_string(resampling_.pool_size));
    }
    if (static_cast<int>(specs.size()) != resampling_.pool_size) {
      throw InvalidArgument("spec-count mismatch: " +
                            std::to_string(specs.size()) +
                            " specs for a pool of " +
                            std::to_string(resampling_.pool_size));
    }
    std::vector<RewardProfile> profiles;
    for (const AgentSpec& s : specs) profiles.push_back(s.profile);
    std::vector<RewardProfile> distinct;
    std::vector<int> counts;
    for (const RewardProfile& p : profiles) {
      auto it = std::find(distinct.begin(), distinct.end(), p);
      if (it == distinct.end()) {
        distinct.push_back(p);
        counts.push_back(1);
      } else {
        ++counts[it - distinct.begin()];
      }
    }
    if (counts != resampling_.group_counts) {
      throw InvalidArgument("pool profiles do not match group counts");
    }
  }
  for (size_t i = 0; i < specs.size(); ++i) {
    agents_.push_back(
        MakeAgent(specs[i], context, ExpandSeed(seed, i, kAgentStream)));
  }
}

std::vector<int> Population::DrawBinding(Rng& pool_rng) const {
  std::vector<int> binding(num_players_);
  for (int i = 0; i < num_players_; ++i) {
    binding[i] = resampling_.pooled
                     ? static_cast<int>(pool_rng.UniformInt(agents_.size()))
                     : i;
  }
  return binding;
}

namespace {

template <typename T>
void WritePod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw IoFailure("checkpoint truncated");
  return value;
}

constexpr char kCheckpointMagic[4] = {'A', 'H', 'C', 'K'};

}  // namespace

void SaveCheckpoint(const std::string& path, const std::string& experiment_id,
                    int agent_id, int64_t step, const ActorCritic& network) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write checkpoint " + path);
  out.write(kCheckpointMagic, 4);
  WritePod(out, kCheckpointVersion);
  WritePod(out, static_cast<uint32_t>(experiment_id.size()));
  out.write(experiment_id.data(), experiment_id.size());
  WritePod(out, static_cast<int32_t>(agent_id));
  WritePod(out, step);
  WritePod(out, static_cast<uint64_t>(network.weights().size()));
  for (double w : network.weights()) WritePod(out, w);
  for (double m : network.optimizer_state()) WritePod(out, m);
  if (!out) throw IoFailure("failed writing checkpoint " + path);
}

CheckpointHeader LoadCheckpoint(const std::string& path,
                                ActorCritic& network) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read checkpoint " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw IoFailure("not a checkpoint: " + path);
  }
  if (ReadPod<uint32_t>(in) != kCheckpointVersion) {
    throw VersionMismatch("unsupported checkpoint version in " + path);
  }
  CheckpointHeader header;
  const uint32_t id_size = ReadPod<uint32_t>(in);
  header.experiment_id.resize(id_size);
  in.read(header.experiment_id.data(), id_size);
  header.agent_id = ReadPod<int32_t>(in);
  header.step = ReadPod<int64_t>(in);
  const uint64_t n = ReadPod<uint64_t>(in);
  if (n != network.weights().size()) {
    throw DimensionMismatch("checkpoint has " + std::to_string(n) +
                            " weights, network has " +
                            std::to_string(network.weights().size()));
  }
  for (double& w : network.weights()) w = ReadPod<double>(in);
  for (double& m : network.optimizer_state()) m = ReadPod<double>(in);
  return header;
}

std::string ManifestText(const AgentSpec& spec) {
  const ActorCriticParams& p = spec.learner.network;
  std::ostringstream out;
  out.precision(17);
  out << "kind=" << ToString(spec.kind) << "\n"
      << "feature_set=" << ToString(spec.learner.features) << "\n"
      << "gamma=" << p.gamma << "\n"
      << "learning_rate=" << p.learning_rate << "\n"
      << "entropy_weight=" << p.entropy_weight << "\n"
      << "value_weight=" << p.value_weight << "\n"
      << "hidden_size=" << p.hidden_size << "\n"
      << "segment_length=" << p.segment_length << "\n"
      << "optimizer="
      << (p.optimizer == OptimizerKind::kSgd ? "sgd" : "rmsprop") << "\n"
      << "rms_decay=" << p.rms_decay << "\n"
      << "rms_epsilon=" << p.rms_epsilon << "\n"
      << "max_grad_norm=" << p.max_grad_norm << "\n";
  return out.str();
}

}  // namespace ah
