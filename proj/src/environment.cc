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

#include "ah/environment.h"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <string>

#include "ah/errors.h"

namespace ah {
namespace {

Position Add(Position a, Position b) { return {a.x + b.x, a.y + b.y}; }
Position Scale(Position a, int k) { return {a.x * k, a.y * k}; }

bool IsMove(Action a) { return static_cast<int>(a) <= 3; }

Position MoveOffset(Action a, Orientation o) {
  switch (a) {
    case Action::kMoveForward:
      return Forward(o);
    case Action::kMoveBackward:
      return Scale(Forward(o), -1);
    case Action::kStrafeLeft:
      return Scale(Right(o), -1);
    case Action::kStrafeRight:
      return Right(o);
    default:
      return {0, 0};
  }
}

// Cells covered by a beam, nearest first and left to right within a row.
// Each lateral lane stops at its first wall.
std::vector<int> BeamFootprint(const EnvConfig& config, const EnvState& state,
                               const PlayerState& shooter) {
  std::vector<int> cells;
  const Position fwd = Forward(shooter.orientation);
  const Position right = Right(shooter.orientation);
  const int half = config.beam_width / 2;
  std::vector<uint8_t> blocked(config.beam_width, 0);
  for (int d = 1; d <= config.beam_length; ++d) {
    for (int l = -half; l <= half; ++l) {
      if (blocked[l + half]) continue;
      const Position p =
          Add(Add(shooter.position, Scale(fwd, d)), Scale(right, l));
      if (state.IsWall(p)) {
        blocked[l + half] = 1;
        continue;
      }
      cells.push_back(state.Index(p));
    }
  }
  return cells;
}

void RemovePlayer(EnvState& state, int player, int until) {
  PlayerState& p = state.players[player];
  state.occupant[state.Index(p.position)] = kNoPlayer;
  p.removed = true;
  p.removed_until = until;
}

// Spawn cell if free, otherwise the nearest free open cell (Manhattan
// distance, ties broken row-major).
Position RespawnCell(const EnvState& state, Position spawn) {
  const int spawn_index = state.Index(spawn);
  if (state.occupant[spawn_index] == kNoPlayer && !state.wall[spawn_index]) {
    return spawn;
  }
  int best = -1;
  int best_distance = 0;
  for (int i = 0; i < state.width * state.height; ++i) {
    if (state.wall[i] || state.occupant[i] != kNoPlayer) continue;
    const Position p = state.At(i);
    const int d = std::abs(p.x - spawn.x) + std::abs(p.y - spawn.y);
    if (best < 0 || d < best_distance) {
      best = i;
      best_distance = d;
    }
  }
  if (best < 0) throw Error("no free cell to respawn a player");
  return state.At(best);
}

}  // namespace

std::string ActionName(Action a, int num_colors) {
  switch (a) {
    case Action::kMoveForward:
      return "move_forward";
    case Action::kMoveBackward:
      return "move_backward";
    case Action::kStrafeLeft:
      return "strafe_left";
    case Action::kStrafeRight:
      return "strafe_right";
    case Action::kTurnLeft:
      return "turn_left";
    case Action::kTurnRight:
      return "turn_right";
    default:
      break;
  }
  if (IsPlant(a, num_colors)) return "plant_" + std::to_string(PlantColor(a));
  if (IsZap(a, num_colors)) return "zap";
  return "invalid";
}

Position Forward(Orientation o) {
  switch (o) {
    case Orientation::kNorth:
      return {0, -1};
    case Orientation::kEast:
      return {1, 0};
    case Orientation::kSouth:
      return {0, 1};
    case Orientation::kWest:
      return {-1, 0};
  }
  return {0, -1};
}

Position Right(Orientation o) {
  return Forward(TurnRight(o));
}

Orientation TurnLeft(Orientation o) {
  return static_cast<Orientation>((static_cast<int>(o) + 3) % 4);
}

Orientation TurnRight(Orientation o) {
  return static_cast<Orientation>((static_cast<int>(o) + 1) % 4);
}

double RipenProbability(int count, double c1, double c3) {
  const double b = static_cast<double>(count);
  const double p = c1 * b + c3 * b * b * b;
  return std::clamp(p, 0.0, 1.0);
}

EnvState CreateState(const EnvConfig& config) {
  config.Validate();
  EnvState state;
  state.width = config.grid_width;
  state.height = config.grid_height;
  state.wall = BuildWalls(config);
  const size_t cells = state.wall.size();
  state.berry_color.assign(cells, kNoBerry);
  state.ripe.assign(cells, 0);
  state.occupant.assign(cells, kNoPlayer);
  state.rng = Rng(config.seed);
  state.color_counts.assign(config.num_colors, 0);
  state.ripe_counts.assign(config.num_colors, 0);

  std::vector<int> open;
  for (size_t i = 0; i < cells; ++i) {
    if (!state.wall[i]) open.push_back(static_cast<int>(i));
  }
  state.rng.Shuffle(std::span<int>(open));

  // The first B shuffled cells take berries, color by color; the next N take
  // players. Adding a player therefore leaves every earlier placement intact.
  size_t next = 0;
  for (int color = 0; color < config.num_colors; ++color) {
    for (int k = 0; k < config.initial_color_counts[color]; ++k) {
      state.berry_color[open[next++]] = static_cast<int8_t>(color);
    }
    state.color_counts[color] = config.initial_color_counts[color];
  }
  state.players.resize(config.num_players);
  for (int i = 0; i < config.num_players; ++i) {
    const int cell = open[next++];
    PlayerState& p = state.players[i];
    p.position = state.At(cell);
    p.spawn = p.position;
    p.orientation = Orientation::kNorth;
    state.occupant[cell] = static_cast<int16_t>(i);
  }
  return state;
}

StepResult StepState(const EnvConfig& config, EnvState& state,
                     std::span<const Action> joint_action) {
  if (state.step >= config.episode_length) {
    throw EpisodeFinished("episode finished at step " +
                          std::to_string(state.step));
  }
  const int n = config.num_players;
  if (static_cast<int>(joint_action.size()) != n) {
    throw InvalidArgument("joint action has " +
                          std::to_string(joint_action.size()) +
                          " entries, expected " + std::to_string(n));
  }
  for (Action a : joint_action) {
    if (static_cast<int>(a) >= config.num_actions()) {
      throw InvalidArgument("action index " +
                            std::to_string(static_cast<int>(a)) +
                            " out of range");
    }
  }

  StepResult result;
  result.rewards.assign(n, 0.0);
  StepEvents& events = result.events;
  const int now = state.step;

  // 1. Turns.
  for (int i = 0; i < n; ++i) {
    PlayerState& p = state.players[i];
    if (p.removed) continue;
    if (joint_action[i] == Action::kTurnLeft) {
      p.orientation = TurnLeft(p.orientation);
    } else if (joint_action[i] == Action::kTurnRight) {
      p.orientation = TurnRight(p.orientation);
    }
  }

  // 2. Moves.
  for (int i = 0; i < n; ++i) {
    PlayerState& p = state.players[i];
    if (p.removed || !IsMove(joint_action[i])) continue;
    const Position target =
        Add(p.position, MoveOffset(joint_action[i], p.orientation));
    if (state.IsWall(target)) continue;
    const int to = state.Index(target);
    if (state.occupant[to] != kNoPlayer) continue;
    state.occupant[state.Index(p.position)] = kNoPlayer;
    state.occupant[to] = static_cast<int16_t>(i);
    p.position = target;
  }

  // 3. Beams.
  for (int i = 0; i < n; ++i) {
    PlayerState& p = state.players[i];
    const Action a = joint_action[i];
    if (p.removed) continue;
    if (IsPlant(a, config.num_colors)) {
      const int color = PlantColor(a);
      p.avatar_color = color;
      for (int cell : BeamFootprint(config, state, p)) {
        const int old = state.berry_color[cell];
        if (old == kNoBerry || state.ripe[cell] || old == color) continue;
        state.berry_color[cell] = static_cast<int8_t>(color);
        --state.color_counts[old];
        ++state.color_counts[color];
        events.plants.push_back({i, cell, old, color});
      }
    } else if (IsZap(a, config.num_colors)) {
      if (!config.zap_enabled || now < p.zap_ready_at) continue;
      p.zap_ready_at = now + 1 + config.zap_cooldown;
      for (int cell : BeamFootprint(config, state, p)) {
        const int victim = state.occupant[cell];
        if (victim == kNoPlayer) continue;
        RemovePlayer(state, victim, now + 1 + config.zap_removal);
        events.zaps.push_back({i, victim});
        break;
      }
    }
  }

  // 4. Eating.
  for (int i = 0; i < n; ++i) {
    const PlayerState& p = state.players[i];
    if (p.removed) continue;
    const int cell = state.Index(p.position);
    const int color = state.berry_color[cell];
    if (color == kNoBerry || !state.ripe[cell]) continue;
    state.ripe[cell] = 0;
    --state.ripe_counts[color];
    result.rewards[i] += config.reward_profiles[i][color];
    events.eats.push_back({i, color, cell});
  }

  // 5. Ripening. Every berry cell consumes exactly one draw so the stream
  // does not depend on which berries happen to be ripe.
  std::vector<double> probability(config.num_colors);
  for (int c = 0; c < config.num_colors; ++c) {
    probability[c] =
        RipenProbability(state.color_counts[c], config.ripen_c1,
                         config.ripen_c3);
  }
  const int cells = state.width * state.height;
  for (int cell = 0; cell < cells; ++cell) {
    const int color = state.berry_color[cell];
    if (color == kNoBerry) continue;
    const double u = state.rng.Uniform();
    if (state.ripe[cell]) continue;
    if (u < probability[color]) {
      state.ripe[cell] = 1;
      ++state.ripe_counts[color];
      events.ripenings.push_back(cell);
    }
  }

  // 6. Respawn.
  for (int i = 0; i < n; ++i) {
    PlayerState& p = state.players[i];
    if (!p.removed || now + 1 < p.removed_until) continue;
    p.position = RespawnCell(state, p.spawn);
    p.orientation = Orientation::kNorth;
    p.removed = false;
    state.occupant[state.Index(p.position)] = static_cast<int16_t>(i);
  }

  // 7. Clock.
  ++state.step;
#ifndef NDEBUG
  CheckInvariants(config, state);
#endif
  return result;
}

void CheckInvariants(const EnvConfig& config, const EnvState& state) {
  std::vector<int> colors(config.num_colors, 0);
  std::vector<int> ripe(config.num_colors, 0);
  const int cells = state.width * state.height;
  for (int cell = 0; cell < cells; ++cell) {
    const int color = state.berry_color[cell];
    if (color == kNoBerry) {
      if (state.ripe[cell]) throw Error("ripe flag on a cell without berry");
      continue;
    }
    if (state.wall[cell]) throw Error("berry on a wall cell");
    if (color < 0 || color >= config.num_colors) {
      throw Error("berry color out of range");
    }
    ++colors[color];
    if (state.ripe[cell]) ++ripe[color];
  }
  if (colors != state.color_counts) throw Error("color_counts cache stale");
  if (ripe != state.ripe_counts) throw Error("ripe_counts cache stale");
  if (std::accumulate(colors.begin(), colors.end(), 0) != config.berry_total) {
    throw Error("berry total not conserved");
  }
  std::vector<int16_t> occupant(cells, kNoPlayer);
  for (size_t i = 0; i < state.players.size(); ++i) {
    const PlayerState& p = state.players[i];
    if (p.removed) continue;
    if (state.IsWall(p.position)) throw Error("player on a wall cell");
    const int cell = state.Index(p.position);
    if (occupant[cell] != kNoPlayer) throw Error("two players share a cell");
    occupant[cell] = static_cast<int16_t>(i);
  }
  if (occupant != state.occupant) throw Error("occupancy map stale");
}

Environment::Environment(EnvConfig config)
    : config_(std::move(config)), state_(CreateState(config_)) {}

StepResult Environment::Step(std::span<const Action> joint_action) {
  return StepState(config_, state_, joint_action);
}

void Environment::Reset(uint64_t seed) {
  config_.seed = seed;
  state_ = CreateState(config_);
}

}  // namespace ah
