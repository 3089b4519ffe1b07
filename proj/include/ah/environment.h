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

#ifndef AH_ENVIRONMENT_H_
#define AH_ENVIRONMENT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ah/env_config.h"
#include "ah/rng.h"

namespace ah {

// Actions 0..5 move and rotate, 6..6+K-1 fire the plant beam of color k, and
// 6+K fires the zap beam. With K = 5 there are 12 actions.
enum class Action : uint8_t {
  kMoveForward = 0,
  kMoveBackward = 1,
  kStrafeLeft = 2,
  kStrafeRight = 3,
  kTurnLeft = 4,
  kTurnRight = 5,
};

inline constexpr int kFirstPlantAction = 6;

constexpr Action PlantAction(int color) {
  return static_cast<Action>(kFirstPlantAction + color);
}
constexpr Action ZapAction(int num_colors) {
  return static_cast<Action>(kFirstPlantAction + num_colors);
}
constexpr bool IsPlant(Action a, int num_colors) {
  const int v = static_cast<int>(a);
  return v >= kFirstPlantAction && v < kFirstPlantAction + num_colors;
}
constexpr int PlantColor(Action a) {
  return static_cast<int>(a) - kFirstPlantAction;
}
constexpr bool IsZap(Action a, int num_colors) {
  return static_cast<int>(a) == kFirstPlantAction + num_colors;
}
std::string ActionName(Action a, int num_colors);

enum class Orientation : uint8_t { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

struct Position {
  int x = 0;
  int y = 0;
  bool operator==(const Position&) const = default;
};

// Unit steps in grid coordinates (y grows southward).
Position Forward(Orientation o);
Position Right(Orientation o);
Orientation TurnLeft(Orientation o);
Orientation TurnRight(Orientation o);

inline constexpr int kNeutralAvatar = -1;
inline constexpr int8_t kNoBerry = -1;
inline constexpr int16_t kNoPlayer = -1;

struct PlayerState {
  Position position;
  Position spawn;
  Orientation orientation = Orientation::kNorth;
  int avatar_color = kNeutralAvatar;
  bool removed = false;
  // First step index at which a removed player is back on the map.
  int removed_until = 0;
  // First step index at which the zap beam may fire again.
  int zap_ready_at = 0;

  bool operator==(const PlayerState&) const = default;
};

// Full world state. Cells are stored row-major; caches are kept in sync with
// the grid incrementally.
struct EnvState {
  int step = 0;
  int width = 0;
  int height = 0;
  std::vector<uint8_t> wall;
  std::vector<int8_t> berry_color;
  std::vector<uint8_t> ripe;
  std::vector<int16_t> occupant;
  std::vector<PlayerState> players;
  Rng rng;
  std::vector<int> color_counts;
  std::vector<int> ripe_counts;

  int Index(Position p) const { return p.y * width + p.x; }
  Position At(int index) const { return {index % width, index / width}; }
  bool InBounds(Position p) const {
    return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height;
  }
  bool IsWall(Position p) const { return !InBounds(p) || wall[Index(p)]; }

  bool operator==(const EnvState&) const = default;
};

struct EatEvent {
  int player;
  int color;
  int cell;
  bool operator==(const EatEvent&) const = default;
};

// Only recolorings are recorded; a beam hitting a berry that already has the
// beam's color changes nothing.
struct PlantEvent {
  int player;
  int cell;
  int old_color;
  int new_color;
  bool operator==(const PlantEvent&) const = default;
};

struct ZapEvent {
  int zapper;
  int victim;
  bool operator==(const ZapEvent&) const = default;
};

struct StepEvents {
  std::vector<EatEvent> eats;
  std::vector<PlantEvent> plants;
  std::vector<ZapEvent> zaps;
  std::vector<int> ripenings;
  bool operator==(const StepEvents&) const = default;
};

struct StepResult {
  std::vector<double> rewards;
  StepEvents events;
};

// Per-step ripening probability for an unripe berry whose color has `count`
// berries on the map: clamp(c1*b + c3*b^3, 0, 1).
double RipenProbability(int count, double c1, double c3);

// Initial state: berries on a seeded shuffle of open cells, all unripe;
// players on distinct seeded cells without berries where possible.
EnvState CreateState(const EnvConfig& config);

// Advances `state` by one step. Sub-step order:
//   1. turns
//   2. moves, ascending player index, blocked by walls and players
//   3. beams, ascending player index
//   4. walk-over eating
//   5. ripening: one draw per berry cell in row-major order
//   6. respawn of players whose removal has expired
//   7. step counter
// Throws EpisodeFinished once step == episode_length.
StepResult StepState(const EnvConfig& config, EnvState& state,
                     std::span<const Action> joint_action);

// Recounts the grid and checks every structural invariant. Throws Error with
// a description of the first violation.
void CheckInvariants(const EnvConfig& config, const EnvState& state);

class Environment {
 public:
  explicit Environment(EnvConfig config);

  const EnvConfig& config() const { return config_; }
  const EnvState& state() const { return state_; }
  bool Done() const { return state_.step >= config_.episode_length; }

  StepResult Step(std::span<const Action> joint_action);
  void Reset(uint64_t seed);

 private:
  EnvConfig config_;
  EnvState state_;
};

}  // namespace ah

#endif  // AH_ENVIRONMENT_H_
