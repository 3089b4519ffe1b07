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

#ifndef AH_ENV_CONFIG_H_
#define AH_ENV_CONFIG_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ah {

using Rgb = std::array<uint8_t, 3>;

enum class WallLayout { kBorder, kQuadrants };
enum class ObservationMode { kSymbolic, kRgb };

std::string ToString(WallLayout layout);
std::string ToString(ObservationMode mode);
WallLayout ParseWallLayout(const std::string& name);
ObservationMode ParseObservationMode(const std::string& name);

inline constexpr double kDefaultRipenC1 = 0.0000025;
inline constexpr double kDefaultRipenC3 = 0.000009;
// Keeps the cubic shape but stops the probability from saturating well
// below the full berry count: p(685) ~ 0.966, p(137) ~ 0.008.
inline constexpr double kCalibratedRipenC3 = 3e-9;
// The calibrated cubic term rescaled so a world of `berry_total` berries
// reaches the same p at full monoculture as 685 berries do.
double CalibratedRipenC3(int berry_total);

inline constexpr double kDefaultPreferredReward = 2.0;
inline constexpr double kDefaultOtherReward = 1.0;

// Reward per consumed ripe berry, indexed by color.
struct RewardProfile {
  std::vector<double> per_color_reward;

  static RewardProfile Preferring(int color, int num_colors,
                                  double preferred = kDefaultPreferredReward,
                                  double other = kDefaultOtherReward);
  static RewardProfile Uniform(int num_colors, double reward = 1.0);

  // The color with the strictly largest reward, if there is one.
  std::optional<int> PreferredColor() const;
  double operator[](int color) const { return per_color_reward[color]; }
  int num_colors() const { return static_cast<int>(per_color_reward.size()); }

  bool operator==(const RewardProfile&) const = default;
};

// Five permutations of [200, 100, 50] so all colors share mean and spread.
std::vector<Rgb> DefaultPalette();

// Grid dimensions include a one-cell wall border: the default 50x30 grid has
// a 48x28 playable interior.
struct EnvConfig {
  int grid_width = 50;
  int grid_height = 30;
  WallLayout wall_layout = WallLayout::kBorder;
  int num_players = 24;
  int berry_total = 685;
  int num_colors = 5;
  std::vector<int> initial_color_counts = {137, 137, 137, 137, 137};
  double ripen_c1 = kDefaultRipenC1;
  double ripen_c3 = kDefaultRipenC3;
  int episode_length = 8000;
  int zap_removal = 200;
  int zap_cooldown = 200;
  int beam_length = 3;
  int beam_width = 1;
  bool zap_enabled = true;
  std::vector<Rgb> color_palette = DefaultPalette();
  std::vector<RewardProfile> reward_profiles = DefaultProfiles();
  ObservationMode observation_mode = ObservationMode::kSymbolic;
  uint64_t seed = 0;

  // Four even groups preferring colors 0..3.
  static std::vector<RewardProfile> DefaultProfiles();

  int num_actions() const { return 7 + num_colors; }
  int num_cells() const { return grid_width * grid_height; }

  // Throws InvalidConfig naming the offending field.
  void Validate() const;

  bool operator==(const EnvConfig&) const = default;
};

// Wall mask (row-major, 1 = wall) for the config's layout.
std::vector<uint8_t> BuildWalls(const EnvConfig& config);

}  // namespace ah

#endif  // AH_ENV_CONFIG_H_
