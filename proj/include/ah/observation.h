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

#ifndef AH_OBSERVATION_H_
#define AH_OBSERVATION_H_

#include <cstdint>
#include <vector>

#include "ah/env_config.h"
#include "ah/environment.h"

namespace ah {

// Egocentric window: 5 cells to each side, 9 ahead, 1 behind. Row 0 is the
// farthest row ahead, row 9 holds the player, row 10 is behind.
inline constexpr int kWindowRows = 11;
inline constexpr int kWindowCols = 11;
inline constexpr int kSelfRow = 9;
inline constexpr int kSelfCol = 5;
inline constexpr int kSpritePixels = 8;
inline constexpr int kRgbSide = kWindowRows * kSpritePixels;  // 88

// Symbolic channel layout for K colors:
//   [0, K)        berry color one-hot
//   K             ripe flag
//   K+1           wall flag (out-of-map cells render as walls)
//   K+2           player present
//   [K+3, 2K+4)   avatar color one-hot, neutral at K+3+K
//   2K+4          self flag
struct ChannelLayout {
  int num_colors;
  int berry(int color) const { return color; }
  int ripe() const { return num_colors; }
  int wall() const { return num_colors + 1; }
  int player() const { return num_colors + 2; }
  int avatar(int color) const {
    return num_colors + 3 + (color == kNeutralAvatar ? num_colors : color);
  }
  int self() const { return 2 * num_colors + 4; }
  int count() const { return 2 * num_colors + 5; }
};

struct Observation {
  ObservationMode mode = ObservationMode::kSymbolic;
  int num_colors = 0;
  // Symbolic: kWindowRows * kWindowCols * channels, row-major, channel last.
  std::vector<uint8_t> symbolic;
  // Rgb: kRgbSide * kRgbSide * 3.
  std::vector<uint8_t> rgb;
  Orientation orientation = Orientation::kNorth;
  // Fraction of the zap cooldown still to wait, in [0, 1].
  double zap_cooldown = 0.0;

  ChannelLayout layout() const { return {num_colors}; }
  uint8_t At(int row, int col, int channel) const {
    return symbolic[(row * kWindowCols + col) * layout().count() + channel];
  }

  bool operator==(const Observation&) const = default;
};

// Map cell seen at window (row, col) by a player at `pos` facing `o`.
Position WindowToWorld(Position pos, Orientation o, int row, int col);

Observation RenderObservation(const EnvConfig& config, const EnvState& state,
                              int player, ObservationMode mode);

// Observations for every player. The parallel variant renders players on
// separate OpenMP threads; both return identical vectors.
std::vector<Observation> RenderAllSerial(const EnvConfig& config,
                                         const EnvState& state,
                                         ObservationMode mode);
std::vector<Observation> RenderAllParallel(const EnvConfig& config,
                                           const EnvState& state,
                                           ObservationMode mode);

struct StepOutput {
  std::vector<double> rewards;
  StepEvents events;
  std::vector<Observation> observations;
};

// Step followed by rendering every player's observation in the config mode.
StepOutput StepAndObserve(Environment& env,
                          std::span<const Action> joint_action);

}  // namespace ah

#endif  // AH_OBSERVATION_H_
